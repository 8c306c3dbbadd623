#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sib/expfam.hpp"

namespace sib {

// One data view: n samples by p^(d) variables, all entries in the support of
// its family.
struct ViewMatrix {
    Eigen::MatrixXd data;
    Family family = Family::gaussian();
    std::string name;

    Eigen::Index n() const { return data.rows(); }
    Eigen::Index p() const { return data.cols(); }
};

struct OutcomeSpec {
    Eigen::VectorXd y;
    Family family = Family::gaussian();
    std::optional<Eigen::MatrixXd> covariates;  // X_E, n x p_E

    Eigen::Index n() const { return y.size(); }
    Eigen::Index p_extra() const {
        return covariates ? covariates->cols() : 0;
    }
};

// Parameter bundle (U, {V^(d)}, W, {mu^(d)}, beta). beta holds the bicluster
// coefficients followed by the covariate coefficients when X_E is present.
struct ModelParams {
    Eigen::MatrixXd U;                 // n x K
    std::vector<Eigen::MatrixXd> V;    // per view, p^(d) x K
    Eigen::MatrixXd W;                 // n x K
    std::vector<Eigen::VectorXd> mu;   // per view, length p^(d)
    Eigen::VectorXd beta;              // K (+ p_E)

    Eigen::Index K() const { return U.cols(); }
    Eigen::Index n() const { return U.rows(); }
};

enum class StopReason { Tolerance, MaxIterations, EmptyComponent };

struct BiclusterResult {
    Eigen::VectorXi assignments;  // 1-based bicluster per sample
    // variable_members[d][k] = sorted 0-based variable indices in bicluster k+1
    std::vector<std::vector<std::vector<int>>> variable_members;
    ModelParams params;
    Eigen::VectorXd beta_hat;
    std::vector<double> loss_trace;
    bool converged = false;
    StopReason stop_reason = StopReason::MaxIterations;
    int iterations = 0;
    bool separation_warning = false;
};

// Validates shared n, family support per entry, and covariate shape.
void validate_inputs(const std::vector<ViewMatrix>& views,
                     const OutcomeSpec& outcome);

// Psi^(d) = 1 mu^(d)^T + (U o W) V^(d)^T
Eigen::MatrixXd natural_params_view(const ModelParams& params, int d);

// psi_y = W beta (+ X_E beta_E)
Eigen::VectorXd natural_param_outcome(const ModelParams& params,
                                      const OutcomeSpec& spec);

// Row-wise argmax of W, 1-based, ties to the lowest column index.
Eigen::VectorXi hard_assign(const Eigen::MatrixXd& W);

// Per-view, per-bicluster variable index sets read off V's support.
// Overlapping: every nonzero loading counts. Non-overlapping: only the
// max-|v| entry of each row, provided it is nonzero; ties to the lowest k.
std::vector<std::vector<std::vector<int>>> variable_membership(
    const std::vector<Eigen::MatrixXd>& V, bool non_overlapping);

// Zeroes all but the max-|v| entry in each row; used when reporting under the
// non-overlapping rule so BIC variable counts match the memberships.
Eigen::MatrixXd keep_row_max_abs(const Eigen::MatrixXd& V);

}  // namespace sib
