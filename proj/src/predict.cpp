#include "sib/predict.hpp"

#include <cmath>
#include <limits>

#include "sib/errors.hpp"
#include "sib/projections.hpp"

namespace sib {

PredictionResult predict(
    const std::vector<ViewMatrix>& new_views, const BiclusterResult& fitted,
    const Family& outcome_family, const FitConfig& config,
    const std::optional<Eigen::MatrixXd>& new_covariates) {
    config.validate();
    if (new_views.size() != fitted.params.V.size()) {
        throw ShapeError("predict: view count differs from the fitted model");
    }
    const Eigen::Index K = fitted.params.K();
    const Eigen::Index m = new_views.front().n();
    if (m < 1) throw ShapeError("predict: no samples");
    Eigen::Index p_total = 0;
    for (std::size_t d = 0; d < new_views.size(); ++d) {
        if (new_views[d].p() != fitted.params.V[d].rows()) {
            throw ShapeError("predict: view '" + new_views[d].name +
                             "' has " + std::to_string(new_views[d].p()) +
                             " variables, model expects " +
                             std::to_string(fitted.params.V[d].rows()));
        }
        if (new_views[d].n() != m) {
            throw ShapeError("predict: views disagree on sample count");
        }
        p_total += new_views[d].p();
    }
    const Eigen::Index p_extra = fitted.params.beta.size() - K;
    if (p_extra > 0 &&
        (!new_covariates || new_covariates->cols() != p_extra ||
         new_covariates->rows() != m)) {
        throw ShapeError("predict: model was fit with covariates; matching "
                         "covariates for the new samples are required");
    }

    // Warm start: least-squares scores of the h-transformed views against the
    // fitted loadings, then column normalization; W uniform.
    Eigen::MatrixXd psi_init(m, p_total);
    Eigen::MatrixXd v_concat(p_total, K);
    Eigen::Index offset = 0;
    for (std::size_t d = 0; d < new_views.size(); ++d) {
        const ViewMatrix& view = new_views[d];
        for (Eigen::Index j = 0; j < view.p(); ++j) {
            for (Eigen::Index i = 0; i < m; ++i) {
                psi_init(i, offset + j) =
                    init_transform(view.family, view.data(i, j));
            }
        }
        v_concat.middleRows(offset, view.p()) = fitted.params.V[d];
        offset += view.p();
    }
    Eigen::MatrixXd gram = v_concat.transpose() * v_concat;
    gram.diagonal().array() += 1e-8;
    Eigen::MatrixXd u_new = psi_init * v_concat * gram.inverse();
    for (Eigen::Index k = 0; k < K; ++k) {
        u_new.col(k) = project_unit_norm(u_new.col(k));
    }

    // Frozen-parameter working copy; rho = 1 silences the outcome term so the
    // shared gradient code computes exactly the view-only loss l_x.
    ModelParams params;
    params.U = u_new;
    params.W = Eigen::MatrixXd::Constant(m, K, 1.0 / static_cast<double>(K));
    params.V = fitted.params.V;
    params.mu = fitted.params.mu;
    params.beta = Eigen::VectorXd::Zero(K);

    OutcomeSpec dummy;
    dummy.y = Eigen::VectorXd::Zero(m);
    dummy.family = Family::gaussian();
    const LossWeights weights = make_weights(1.0, 0.0, new_views.size(), K);

    PredictionResult out;
    double loss = loss_smooth(new_views, dummy, params, weights);
    out.loss_trace.push_back(loss);
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        out.iterations = iter;
        Eigen::MatrixXd u_unproj =
            params.U - config.alpha * grad_u(new_views, dummy, params, weights);
        for (Eigen::Index k = 0; k < K; ++k) {
            params.U.col(k) = project_unit_norm(u_unproj.col(k));
        }
        Eigen::MatrixXd w_unproj =
            params.W - config.alpha * grad_w(new_views, dummy, params, weights);
        for (Eigen::Index i = 0; i < m; ++i) {
            params.W.row(i) =
                project_simplex(w_unproj.row(i).transpose()).transpose();
        }
        const double l_new = loss_smooth(new_views, dummy, params, weights);
        out.loss_trace.push_back(l_new);
        if (std::abs(l_new - loss) / (std::abs(loss) + 1e-12) < config.tol) {
            out.converged = true;
            loss = l_new;
            break;
        }
        loss = l_new;
    }

    out.U_new = params.U;
    out.W_new = params.W;
    out.assignments = hard_assign(params.W);
    out.psi_y_hat = params.W * fitted.beta_hat.head(K);
    if (p_extra > 0) {
        out.psi_y_hat += *new_covariates * fitted.beta_hat.tail(p_extra);
    }
    out.y_hat.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        out.y_hat(i) = mean_link(outcome_family, out.psi_y_hat(i));
    }
    return out;
}

std::vector<int> align_biclusters_by_beta(const Eigen::VectorXd& beta_base,
                                          const Eigen::VectorXd& beta_other) {
    const Eigen::Index k_other = beta_other.size();
    const Eigen::Index k_base = beta_base.size();
    std::vector<int> match(k_other, -1);
    std::vector<bool> base_used(k_base, false);
    std::vector<bool> other_used(k_other, false);
    const Eigen::Index n_pairs = std::min(k_base, k_other);
    for (Eigen::Index step = 0; step < n_pairs; ++step) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1;
        int oj = -1;
        for (Eigen::Index j = 0; j < k_other; ++j) {
            if (other_used[j]) continue;
            for (Eigen::Index i = 0; i < k_base; ++i) {
                if (base_used[i]) continue;
                const double diff = std::abs(beta_base(i) - beta_other(j));
                if (diff < best) {
                    best = diff;
                    bi = static_cast<int>(i);
                    oj = static_cast<int>(j);
                }
            }
        }
        base_used[bi] = true;
        other_used[oj] = true;
        match[oj] = bi;
    }
    return match;
}

}  // namespace sib
