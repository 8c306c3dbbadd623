#include "sib/model.hpp"

#include <cmath>

#include "sib/errors.hpp"

namespace sib {

void validate_inputs(const std::vector<ViewMatrix>& views,
                     const OutcomeSpec& outcome) {
    if (views.empty()) throw ConfigError("at least one view is required");
    const Eigen::Index n = views.front().n();
    if (n == 0) throw ConfigError("views must have at least one sample");
    for (const auto& view : views) {
        if (view.n() != n) {
            throw ShapeError("view '" + view.name + "' has " +
                             std::to_string(view.n()) + " rows, expected " +
                             std::to_string(n));
        }
        if (view.p() == 0) {
            throw ConfigError("view '" + view.name + "' has no variables");
        }
        if (!view.family.likelihood_capable()) {
            throw ConfigError("view '" + view.name + "': family '" +
                              view.family.name() +
                              "' cannot be used as a likelihood family");
        }
        for (Eigen::Index j = 0; j < view.p(); ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!in_support(view.family, view.data(i, j))) {
                    throw DataError(
                        "view '" + view.name + "' entry (" +
                        std::to_string(i) + "," + std::to_string(j) +
                        ") = " + std::to_string(view.data(i, j)) +
                        " outside support of '" + view.family.name() + "'");
                }
            }
        }
    }
    if (outcome.y.size() != n) {
        throw ShapeError("outcome length " + std::to_string(outcome.y.size()) +
                         " does not match sample count " + std::to_string(n));
    }
    if (!outcome.family.likelihood_capable()) {
        throw ConfigError("outcome family '" + outcome.family.name() +
                          "' cannot be used as a likelihood family");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!in_support(outcome.family, outcome.y(i))) {
            throw DataError("outcome entry " + std::to_string(i) + " = " +
                            std::to_string(outcome.y(i)) +
                            " outside support of '" + outcome.family.name() +
                            "'");
        }
    }
    if (outcome.covariates && outcome.covariates->rows() != n) {
        throw ShapeError("covariate matrix has " +
                         std::to_string(outcome.covariates->rows()) +
                         " rows, expected " + std::to_string(n));
    }
}

Eigen::MatrixXd natural_params_view(const ModelParams& params, int d) {
    if (d < 0 || d >= static_cast<int>(params.V.size())) {
        throw ShapeError("view index " + std::to_string(d) + " out of range");
    }
    const Eigen::MatrixXd& V = params.V[d];
    if (params.U.rows() != params.W.rows() ||
        params.U.cols() != params.W.cols() || V.cols() != params.U.cols() ||
        params.mu[d].size() != V.rows()) {
        throw ShapeError("natural_params_view: inconsistent dimensions");
    }
    Eigen::MatrixXd psi =
        (params.U.array() * params.W.array()).matrix() * V.transpose();
    psi.rowwise() += params.mu[d].transpose();
    return psi;
}

Eigen::VectorXd natural_param_outcome(const ModelParams& params,
                                      const OutcomeSpec& spec) {
    const Eigen::Index K = params.K();
    if (params.beta.size() != K + spec.p_extra()) {
        throw ShapeError("beta length " + std::to_string(params.beta.size()) +
                         " != K + p_E = " +
                         std::to_string(K + spec.p_extra()));
    }
    Eigen::VectorXd psi = params.W * params.beta.head(K);
    if (spec.covariates) {
        psi += *spec.covariates * params.beta.tail(spec.p_extra());
    }
    return psi;
}

Eigen::VectorXi hard_assign(const Eigen::MatrixXd& W) {
    Eigen::VectorXi assignments(W.rows());
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
        int best = 0;
        for (Eigen::Index k = 1; k < W.cols(); ++k) {
            if (W(i, k) > W(i, best)) best = static_cast<int>(k);
        }
        assignments(i) = best + 1;
    }
    return assignments;
}

std::vector<std::vector<std::vector<int>>> variable_membership(
    const std::vector<Eigen::MatrixXd>& V, bool non_overlapping) {
    std::vector<std::vector<std::vector<int>>> members;
    members.reserve(V.size());
    for (const auto& Vd : V) {
        std::vector<std::vector<int>> per_k(Vd.cols());
        for (Eigen::Index j = 0; j < Vd.rows(); ++j) {
            if (non_overlapping) {
                int best = -1;
                double best_abs = 0.0;
                for (Eigen::Index k = 0; k < Vd.cols(); ++k) {
                    const double a = std::abs(Vd(j, k));
                    if (a > best_abs) {
                        best_abs = a;
                        best = static_cast<int>(k);
                    }
                }
                if (best >= 0) per_k[best].push_back(static_cast<int>(j));
            } else {
                for (Eigen::Index k = 0; k < Vd.cols(); ++k) {
                    if (Vd(j, k) != 0.0) per_k[k].push_back(static_cast<int>(j));
                }
            }
        }
        members.push_back(std::move(per_k));
    }
    return members;
}

Eigen::MatrixXd keep_row_max_abs(const Eigen::MatrixXd& V) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(V.rows(), V.cols());
    for (Eigen::Index j = 0; j < V.rows(); ++j) {
        int best = -1;
        double best_abs = 0.0;
        for (Eigen::Index k = 0; k < V.cols(); ++k) {
            const double a = std::abs(V(j, k));
            if (a > best_abs) {
                best_abs = a;
                best = static_cast<int>(k);
            }
        }
        if (best >= 0) out(j, best) = V(j, best);
    }
    return out;
}

}  // namespace sib
