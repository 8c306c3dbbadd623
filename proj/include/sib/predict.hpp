#pragma once

#include <optional>

#include "sib/fit.hpp"

namespace sib {

struct PredictionResult {
    Eigen::MatrixXd W_new;         // m x K, rows on the simplex
    Eigen::MatrixXd U_new;         // m x K, unit-norm columns
    Eigen::VectorXi assignments;   // 1-based
    Eigen::VectorXd psi_y_hat;
    Eigen::VectorXd y_hat;         // mean-scale predictions
    bool converged = false;
    int iterations = 0;
    std::vector<double> loss_trace;
};

// Alternating U/W minimization of the view-only averaged loss with V and mu
// frozen at the fitted values, then psi_y = W_new * beta_hat and the mean
// link of the outcome family. Test outcomes are never read.
PredictionResult predict(
    const std::vector<ViewMatrix>& new_views, const BiclusterResult& fitted,
    const Family& outcome_family, const FitConfig& config,
    const std::optional<Eigen::MatrixXd>& new_covariates = std::nullopt);

// Greedy alignment of bicluster labels across two fits by nearest beta
// values; returns for each bicluster of `other` the matching index in `base`
// (0-based).
std::vector<int> align_biclusters_by_beta(const Eigen::VectorXd& beta_base,
                                          const Eigen::VectorXd& beta_other);

}  // namespace sib
