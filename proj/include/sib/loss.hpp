#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sib/model.hpp"

namespace sib {

// Mixing weight rho and the L1 penalties lambda_kd (one vector of length K
// per view; a shared per-view lambda is just a constant vector).
struct LossWeights {
    double rho = 0.5;
    std::vector<Eigen::VectorXd> lambdas;

    void validate(Eigen::Index n_views, Eigen::Index K) const;
};

// Builds per-view lambda vectors from a single scalar shared across views
// and components.
LossWeights make_weights(double rho, double lambda, Eigen::Index n_views,
                         Eigen::Index K);

enum class Block { U, V, W, Mu, Beta };

// Differentiable part l0: rho-weighted averaged view NLL plus
// (1-rho)-weighted averaged outcome NLL.
double loss_smooth(const std::vector<ViewMatrix>& views,
                   const OutcomeSpec& outcome, const ModelParams& params,
                   const LossWeights& weights);

// l0 plus the L1 penalty sum_d sum_k lambda_kd |V_.k^(d)|_1.
double loss_total(const std::vector<ViewMatrix>& views,
                  const OutcomeSpec& outcome, const ModelParams& params,
                  const LossWeights& weights);

// Unaveraged, unweighted negative log-likelihood over all view entries and
// the outcome; the L-hat used by the information criteria.
double nll_unaveraged(const std::vector<ViewMatrix>& views,
                      const OutcomeSpec& outcome, const ModelParams& params);

// Gradients of loss_smooth; the L1 penalty is handled by the prox, never here.
Eigen::MatrixXd grad_u(const std::vector<ViewMatrix>& views,
                       const OutcomeSpec& outcome, const ModelParams& params,
                       const LossWeights& weights);
Eigen::MatrixXd grad_w(const std::vector<ViewMatrix>& views,
                       const OutcomeSpec& outcome, const ModelParams& params,
                       const LossWeights& weights);
std::vector<Eigen::MatrixXd> grad_v(const std::vector<ViewMatrix>& views,
                                    const ModelParams& params,
                                    const LossWeights& weights);
std::vector<Eigen::VectorXd> grad_mu(const std::vector<ViewMatrix>& views,
                                     const ModelParams& params,
                                     const LossWeights& weights);
Eigen::VectorXd grad_beta(const OutcomeSpec& outcome,
                          const ModelParams& params,
                          const LossWeights& weights);

}  // namespace sib
