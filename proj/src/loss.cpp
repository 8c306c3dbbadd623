#include "sib/loss.hpp"

#include <cmath>

#include "sib/errors.hpp"

namespace sib {

namespace {

void check_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw NumericalError(std::string("non-finite ") + what +
                             " (overflow in cumulant or residual)");
    }
}

// Vectorized G and G' over an array of natural parameters.
Eigen::ArrayXXd cumulant_array(const Family& f, const Eigen::ArrayXXd& psi) {
    switch (f.kind()) {
        case Family::Kind::Gaussian:
            return 0.5 * psi.square();
        case Family::Kind::Bernoulli:
            return psi.max(0.0) + (-psi.abs()).exp().log1p();
        case Family::Kind::Poisson:
            return psi.exp();
        default:
            throw ConfigError("cumulant: family '" + f.name() +
                              "' is not a likelihood family");
    }
}

Eigen::ArrayXXd mean_link_array(const Family& f, const Eigen::ArrayXXd& psi) {
    switch (f.kind()) {
        case Family::Kind::Gaussian:
            return psi;
        case Family::Kind::Bernoulli:
            return 1.0 / (1.0 + (-psi).exp());
        case Family::Kind::Poisson:
            return psi.exp();
        default:
            throw ConfigError("mean_link: family '" + f.name() +
                              "' is not a likelihood family");
    }
}

// rho/(n*p_d) * (G'(Psi) - X)
Eigen::MatrixXd view_residual(const ViewMatrix& view,
                              const ModelParams& params, int d, double rho) {
    const Eigen::MatrixXd psi = natural_params_view(params, d);
    const double scale =
        rho / (static_cast<double>(view.n()) * static_cast<double>(view.p()));
    return (scale *
            (mean_link_array(view.family, psi.array()) - view.data.array()))
        .matrix();
}

// (1-rho)/n * (G'(psi_y) - y)
Eigen::VectorXd outcome_residual(const OutcomeSpec& outcome,
                                 const ModelParams& params, double rho) {
    const Eigen::VectorXd psi = natural_param_outcome(params, outcome);
    const double scale = (1.0 - rho) / static_cast<double>(outcome.n());
    return (scale *
            (mean_link_array(outcome.family, psi.array()) - outcome.y.array()))
        .matrix();
}

}  // namespace

void LossWeights::validate(Eigen::Index n_views, Eigen::Index K) const {
    if (rho < 0.0 || rho > 1.0) {
        throw ConfigError("rho must be in [0,1]");
    }
    if (static_cast<Eigen::Index>(lambdas.size()) != n_views) {
        throw ConfigError("expected one lambda vector per view");
    }
    for (const auto& lam : lambdas) {
        if (lam.size() != K) throw ConfigError("lambda vector length != K");
        if ((lam.array() < 0.0).any()) {
            throw ConfigError("lambda values must be non-negative");
        }
    }
}

LossWeights make_weights(double rho, double lambda, Eigen::Index n_views,
                         Eigen::Index K) {
    LossWeights w;
    w.rho = rho;
    w.lambdas.assign(n_views, Eigen::VectorXd::Constant(K, lambda));
    return w;
}

double loss_smooth(const std::vector<ViewMatrix>& views,
                   const OutcomeSpec& outcome, const ModelParams& params,
                   const LossWeights& weights) {
    double total = 0.0;
    for (int d = 0; d < static_cast<int>(views.size()); ++d) {
        const ViewMatrix& view = views[d];
        const Eigen::MatrixXd psi = natural_params_view(params, d);
        const double view_sum = (cumulant_array(view.family, psi.array()) -
                                 view.data.array() * psi.array())
                                    .sum();
        total += weights.rho * view_sum /
                 (static_cast<double>(view.n()) * static_cast<double>(view.p()));
    }
    const Eigen::VectorXd psi_y = natural_param_outcome(params, outcome);
    const double outcome_sum =
        (cumulant_array(outcome.family, psi_y.array()) -
         outcome.y.array() * psi_y.array())
            .sum();
    total += (1.0 - weights.rho) * outcome_sum /
             static_cast<double>(outcome.n());
    check_finite(total, "smooth loss");
    return total;
}

double loss_total(const std::vector<ViewMatrix>& views,
                  const OutcomeSpec& outcome, const ModelParams& params,
                  const LossWeights& weights) {
    double penalty = 0.0;
    for (std::size_t d = 0; d < params.V.size(); ++d) {
        for (Eigen::Index k = 0; k < params.V[d].cols(); ++k) {
            penalty += weights.lambdas[d](k) *
                       params.V[d].col(k).array().abs().sum();
        }
    }
    return loss_smooth(views, outcome, params, weights) + penalty;
}

double nll_unaveraged(const std::vector<ViewMatrix>& views,
                      const OutcomeSpec& outcome, const ModelParams& params) {
    double total = 0.0;
    for (int d = 0; d < static_cast<int>(views.size()); ++d) {
        const ViewMatrix& view = views[d];
        const Eigen::MatrixXd psi = natural_params_view(params, d);
        total += (cumulant_array(view.family, psi.array()) -
                  view.data.array() * psi.array())
                     .sum();
    }
    const Eigen::VectorXd psi_y = natural_param_outcome(params, outcome);
    total += (cumulant_array(outcome.family, psi_y.array()) -
              outcome.y.array() * psi_y.array())
                 .sum();
    check_finite(total, "unaveraged NLL");
    return total;
}

Eigen::MatrixXd grad_u(const std::vector<ViewMatrix>& views,
                       const OutcomeSpec& outcome, const ModelParams& params,
                       const LossWeights& weights) {
    (void)outcome;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(params.n(), params.K());
    for (int d = 0; d < static_cast<int>(views.size()); ++d) {
        t += view_residual(views[d], params, d, weights.rho) * params.V[d];
    }
    return (t.array() * params.W.array()).matrix();
}

Eigen::MatrixXd grad_w(const std::vector<ViewMatrix>& views,
                       const OutcomeSpec& outcome, const ModelParams& params,
                       const LossWeights& weights) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(params.n(), params.K());
    for (int d = 0; d < static_cast<int>(views.size()); ++d) {
        t += view_residual(views[d], params, d, weights.rho) * params.V[d];
    }
    Eigen::MatrixXd g = (t.array() * params.U.array()).matrix();
    const Eigen::VectorXd r = outcome_residual(outcome, params, weights.rho);
    g += r * params.beta.head(params.K()).transpose();
    return g;
}

std::vector<Eigen::MatrixXd> grad_v(const std::vector<ViewMatrix>& views,
                                    const ModelParams& params,
                                    const LossWeights& weights) {
    std::vector<Eigen::MatrixXd> grads;
    grads.reserve(views.size());
    const Eigen::MatrixXd uw =
        (params.U.array() * params.W.array()).matrix();
    for (int d = 0; d < static_cast<int>(views.size()); ++d) {
        grads.push_back(
            view_residual(views[d], params, d, weights.rho).transpose() * uw);
    }
    return grads;
}

std::vector<Eigen::VectorXd> grad_mu(const std::vector<ViewMatrix>& views,
                                     const ModelParams& params,
                                     const LossWeights& weights) {
    std::vector<Eigen::VectorXd> grads;
    grads.reserve(views.size());
    for (int d = 0; d < static_cast<int>(views.size()); ++d) {
        grads.push_back(view_residual(views[d], params, d, weights.rho)
                            .colwise()
                            .sum()
                            .transpose());
    }
    return grads;
}

Eigen::VectorXd grad_beta(const OutcomeSpec& outcome,
                          const ModelParams& params,
                          const LossWeights& weights) {
    const Eigen::VectorXd r = outcome_residual(outcome, params, weights.rho);
    Eigen::VectorXd g(params.beta.size());
    g.head(params.K()) = params.W.transpose() * r;
    if (outcome.covariates) {
        g.tail(outcome.p_extra()) = outcome.covariates->transpose() * r;
    }
    return g;
}

}  // namespace sib
