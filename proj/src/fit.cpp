#include "sib/fit.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "sib/errors.hpp"
#include "sib/projections.hpp"

namespace sib {

namespace {

constexpr double kLossDenomFloor = 1e-12;

Eigen::MatrixXd design_matrix(const OutcomeSpec& outcome,
                              const Eigen::MatrixXd& W_hat) {
    if (!outcome.covariates) return W_hat;
    Eigen::MatrixXd design(W_hat.rows(), W_hat.cols() + outcome.p_extra());
    design << W_hat, *outcome.covariates;
    return design;
}

// True when component k has an all-zero loading column in every view.
bool has_empty_v_column(const std::vector<Eigen::MatrixXd>& V,
                        Eigen::Index K) {
    for (Eigen::Index k = 0; k < K; ++k) {
        bool all_zero = true;
        for (const auto& Vd : V) {
            if ((Vd.col(k).array() != 0.0).any()) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) return true;
    }
    return false;
}

}  // namespace

void FitConfig::validate() const {
    if (alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (tol <= 0.0) throw ConfigError("tol must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (K < 1) throw ConfigError("K must be >= 1");
}

ModelParams initialize(const std::vector<ViewMatrix>& views,
                       const OutcomeSpec& outcome, const FitConfig& config) {
    config.validate();
    validate_inputs(views, outcome);

    const Eigen::Index n = views.front().n();
    Eigen::Index p_total = 0;
    for (const auto& view : views) p_total += view.p();
    if (config.K > std::min(n, p_total)) {
        throw ConfigError("K = " + std::to_string(config.K) +
                          " exceeds min(n, total variables) = " +
                          std::to_string(std::min(n, p_total)));
    }

    Eigen::MatrixXd psi(n, p_total);
    Eigen::Index offset = 0;
    for (const auto& view : views) {
        for (Eigen::Index j = 0; j < view.p(); ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                psi(i, offset + j) = init_transform(view.family, view.data(i, j));
            }
        }
        offset += view.p();
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(psi,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericalError("SVD of the initialization matrix failed");
    }

    ModelParams params;
    params.U = svd.matrixU().leftCols(config.K);
    const Eigen::MatrixXd v_full =
        svd.matrixV().leftCols(config.K) *
        svd.singularValues().head(config.K).asDiagonal();
    offset = 0;
    for (const auto& view : views) {
        params.V.push_back(v_full.middleRows(offset, view.p()));
        params.mu.push_back(Eigen::VectorXd::Zero(view.p()));
        offset += view.p();
    }
    params.W = Eigen::MatrixXd::Ones(n, config.K);
    params.beta = Eigen::VectorXd::Zero(config.K + outcome.p_extra());
    return params;
}

BiclusterResult fit(const std::vector<ViewMatrix>& views,
                    const OutcomeSpec& outcome, const FitConfig& config) {
    return fit_from(views, outcome, config,
                    initialize(views, outcome, config));
}

BiclusterResult fit_from(const std::vector<ViewMatrix>& views,
                         const OutcomeSpec& outcome, const FitConfig& config,
                         ModelParams params) {
    config.validate();
    validate_inputs(views, outcome);
    LossWeights weights = config.weights;
    if (weights.lambdas.empty()) {
        weights = make_weights(weights.rho, 0.0, views.size(), config.K);
    }
    weights.validate(static_cast<Eigen::Index>(views.size()), config.K);

    BiclusterResult result;
    const double alpha = config.alpha;

    auto loss_at = [&](const char* block, int iter) {
        try {
            return loss_smooth(views, outcome, params, weights);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (iteration " +
                                 std::to_string(iter) + ", after block " +
                                 block + ")");
        }
    };

    double loss = loss_at("init", 0);
    result.loss_trace.push_back(loss);

    ModelParams snapshot = params;  // pre-iteration state for the empty-V stop
    int iterations = 0;
    StopReason reason = StopReason::MaxIterations;

    for (int m = 1; m <= config.max_iter; ++m) {
        snapshot = params;
        iterations = m;

        // U step: gradient, then unit-norm columns
        Eigen::MatrixXd u_unproj =
            params.U - alpha * grad_u(views, outcome, params, weights);
        for (Eigen::Index k = 0; k < u_unproj.cols(); ++k) {
            params.U.col(k) = project_unit_norm(u_unproj.col(k));
        }
        double l_new = loss_at("U", m);

        // W step: gradient, then simplex rows
        Eigen::MatrixXd w_unproj =
            params.W - alpha * grad_w(views, outcome, params, weights);
        for (Eigen::Index i = 0; i < w_unproj.rows(); ++i) {
            params.W.row(i) =
                project_simplex(w_unproj.row(i).transpose()).transpose();
        }
        l_new = loss_at("W", m);

        // V step: gradient, then the L1 prox with threshold lambda_kd * alpha
        const std::vector<Eigen::MatrixXd> gv = grad_v(views, params, weights);
        for (std::size_t d = 0; d < params.V.size(); ++d) {
            Eigen::MatrixXd& Vd = params.V[d];
            const Eigen::MatrixXd v_unproj = Vd - alpha * gv[d];
            for (Eigen::Index k = 0; k < Vd.cols(); ++k) {
                const double thresh = weights.lambdas[d](k) * alpha;
                for (Eigen::Index j = 0; j < Vd.rows(); ++j) {
                    Vd(j, k) = soft_threshold(v_unproj(j, k), thresh);
                }
            }
        }
        l_new = loss_at("V", m);

        // mu step (unconstrained)
        const std::vector<Eigen::VectorXd> gmu = grad_mu(views, params, weights);
        for (std::size_t d = 0; d < params.mu.size(); ++d) {
            params.mu[d] -= alpha * gmu[d];
        }
        l_new = loss_at("mu", m);

        // beta step (unconstrained)
        params.beta -= alpha * grad_beta(outcome, params, weights);
        l_new = loss_at("beta", m);

        result.loss_trace.push_back(l_new);

        if (std::abs(l_new - loss) / (std::abs(loss) + kLossDenomFloor) <
            config.tol) {
            reason = StopReason::Tolerance;
            loss = l_new;
            break;
        }
        if (has_empty_v_column(params.V, config.K)) {
            params = snapshot;  // report the pre-zero iterate
            result.loss_trace.pop_back();
            reason = StopReason::EmptyComponent;
            break;
        }
        loss = l_new;
    }

    result.stop_reason = reason;
    result.converged = (reason == StopReason::Tolerance);
    result.iterations = iterations;

    result.beta_hat =
        refit_beta(outcome, params.W, &result.separation_warning);
    params.beta = result.beta_hat;

    if (config.non_overlapping) {
        for (auto& Vd : params.V) Vd = keep_row_max_abs(Vd);
    }
    result.assignments = hard_assign(params.W);
    result.variable_members =
        variable_membership(params.V, config.non_overlapping);
    result.params = std::move(params);
    return result;
}

Eigen::VectorXd refit_beta(const OutcomeSpec& outcome,
                           const Eigen::MatrixXd& W_hat,
                           bool* separation_warning) {
    const Eigen::MatrixXd design = design_matrix(outcome, W_hat);
    const Eigen::Index q = design.cols();
    if (separation_warning) *separation_warning = false;

    if (outcome.family.kind() == Family::Kind::Gaussian) {
        Eigen::MatrixXd gram = design.transpose() * design;
        gram.diagonal().array() += 1e-10;  // jitter for rank deficiency
        return gram.ldlt().solve(design.transpose() * outcome.y);
    }

    // Newton-Raphson for the canonical-link GLM (Bernoulli or Poisson).
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const Eigen::VectorXd eta = design * beta;
        Eigen::VectorXd mean(eta.size());
        Eigen::VectorXd var(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            mean(i) = mean_link(outcome.family, eta(i));
            var(i) = outcome.family.kind() == Family::Kind::Bernoulli
                         ? mean(i) * (1.0 - mean(i))
                         : mean(i);
        }
        const Eigen::VectorXd grad = design.transpose() * (mean - outcome.y);
        if (grad.norm() <= 1e-8) {
            converged = true;
            break;
        }
        Eigen::MatrixXd hess =
            design.transpose() * var.asDiagonal() * design;
        hess.diagonal().array() += 1e-10;
        beta -= hess.ldlt().solve(grad);
        if (!beta.allFinite()) {
            throw NumericalError("beta refit diverged to non-finite values");
        }
    }
    if (!converged && separation_warning) *separation_warning = true;
    return beta;
}

}  // namespace sib
