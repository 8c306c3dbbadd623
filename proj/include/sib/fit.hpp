#pragma once

#include <cstdint>
#include <vector>

#include "sib/loss.hpp"
#include "sib/model.hpp"

namespace sib {

struct FitConfig {
    double alpha = 1e-2;    // gradient step size
    double tol = 1e-5;      // relative loss-change tolerance
    int max_iter = 2000;
    LossWeights weights;    // rho and per-view lambda_kd; filled by helpers
    int K = 3;
    bool non_overlapping = false;
    std::uint64_t seed = 0;

    void validate() const;
};

// SVD warm start: U, V from the truncated SVD of the h-transformed
// concatenation of all views; W all ones; mu and beta zero. W is left
// unprojected, the first W update projects it.
ModelParams initialize(const std::vector<ViewMatrix>& views,
                       const OutcomeSpec& outcome, const FitConfig& config);

// Alternating projected gradient descent with cyclic block updates
// U -> W -> V -> mu -> beta, the loss refreshed after every block, followed
// by the beta refit on the converged W.
BiclusterResult fit(const std::vector<ViewMatrix>& views,
                    const OutcomeSpec& outcome, const FitConfig& config);

// Same as fit() but starting from caller-supplied parameters (test hook and
// the prediction warm start path).
BiclusterResult fit_from(const std::vector<ViewMatrix>& views,
                         const OutcomeSpec& outcome, const FitConfig& config,
                         ModelParams params);

// Exponential-family GLM of y on [W | X_E] without intercept. Gaussian:
// normal equations with a 1e-10 ridge jitter. Bernoulli: Newton-Raphson,
// at most 100 steps, gradient-norm tolerance 1e-8; non-convergence sets the
// separation flag and returns the last iterate.
Eigen::VectorXd refit_beta(const OutcomeSpec& outcome,
                           const Eigen::MatrixXd& W_hat,
                           bool* separation_warning = nullptr);

}  // namespace sib
