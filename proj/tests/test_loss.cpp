#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "sib/loss.hpp"

using namespace sib;

namespace {

struct Instance {
    std::vector<ViewMatrix> views;
    OutcomeSpec outcome;
    ModelParams params;
    LossWeights weights;
};

double draw_in_support(const Family& f, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    switch (f.kind()) {
        case Family::Kind::Gaussian: return gauss(rng);
        case Family::Kind::Bernoulli: return (rng() & 1u) ? 1.0 : 0.0;
        case Family::Kind::Poisson:
            return static_cast<double>(rng() % 7);
        default: return 0.0;
    }
}

Instance make_instance(const std::vector<Family>& view_families,
                       const Family& outcome_family, bool covariates,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 8, K = 3;
    const std::vector<int> widths = {6, 4};

    Instance inst;
    for (std::size_t d = 0; d < view_families.size(); ++d) {
        ViewMatrix view;
        view.family = view_families[d];
        view.name = "v" + std::to_string(d);
        view.data.resize(n, widths[d % widths.size()]);
        for (Eigen::Index i = 0; i < view.data.rows(); ++i)
            for (Eigen::Index j = 0; j < view.data.cols(); ++j)
                view.data(i, j) = draw_in_support(view.family, rng);
        inst.views.push_back(std::move(view));
    }

    inst.outcome.family = outcome_family;
    inst.outcome.y.resize(n);
    for (int i = 0; i < n; ++i) {
        inst.outcome.y(i) = draw_in_support(outcome_family, rng);
    }
    int p_extra = 0;
    if (covariates) {
        p_extra = 2;
        Eigen::MatrixXd X(n, p_extra);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p_extra; ++j) X(i, j) = gauss(rng);
        inst.outcome.covariates = X;
    }

    auto fill = [&](Eigen::MatrixXd& m, double scale) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                m(i, j) = scale * gauss(rng);
    };
    inst.params.U.resize(n, K);
    inst.params.W.resize(n, K);
    fill(inst.params.U, 0.5);
    fill(inst.params.W, 0.5);
    for (const ViewMatrix& view : inst.views) {
        Eigen::MatrixXd V(view.p(), K);
        fill(V, 0.5);
        inst.params.V.push_back(V);
        Eigen::VectorXd mu(view.p());
        for (Eigen::Index j = 0; j < view.p(); ++j) mu(j) = 0.3 * gauss(rng);
        inst.params.mu.push_back(mu);
    }
    inst.params.beta.resize(K + p_extra);
    for (Eigen::Index k = 0; k < inst.params.beta.size(); ++k) {
        inst.params.beta(k) = 0.5 * gauss(rng);
    }

    inst.weights = make_weights(0.6, 0.0, static_cast<Eigen::Index>(
                                              inst.views.size()), K);
    return inst;
}

// Central finite difference of loss_smooth with respect to one coordinate.
double fd(Instance& inst, double* coord, double h = 1e-6) {
    const double saved = *coord;
    *coord = saved + h;
    const double up =
        loss_smooth(inst.views, inst.outcome, inst.params, inst.weights);
    *coord = saved - h;
    const double down =
        loss_smooth(inst.views, inst.outcome, inst.params, inst.weights);
    *coord = saved;
    return (up - down) / (2 * h);
}

void check_gradients(Instance inst, double tol) {
    const Eigen::MatrixXd gu =
        grad_u(inst.views, inst.outcome, inst.params, inst.weights);
    const Eigen::MatrixXd gw =
        grad_w(inst.views, inst.outcome, inst.params, inst.weights);
    const auto gv = grad_v(inst.views, inst.params, inst.weights);
    const auto gmu = grad_mu(inst.views, inst.params, inst.weights);
    const Eigen::VectorXd gb =
        grad_beta(inst.outcome, inst.params, inst.weights);

    auto close = [tol](double a, double b) {
        return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
    };
    for (Eigen::Index i = 0; i < gu.rows(); ++i) {
        for (Eigen::Index k = 0; k < gu.cols(); ++k) {
            CHECK(close(gu(i, k), fd(inst, &inst.params.U(i, k))));
            CHECK(close(gw(i, k), fd(inst, &inst.params.W(i, k))));
        }
    }
    for (std::size_t d = 0; d < inst.views.size(); ++d) {
        for (Eigen::Index j = 0; j < gv[d].rows(); ++j) {
            for (Eigen::Index k = 0; k < gv[d].cols(); ++k) {
                CHECK(close(gv[d](j, k), fd(inst, &inst.params.V[d](j, k))));
            }
            CHECK(close(gmu[d](j), fd(inst, &inst.params.mu[d](j))));
        }
    }
    for (Eigen::Index k = 0; k < gb.size(); ++k) {
        CHECK(close(gb(k), fd(inst, &inst.params.beta(k))));
    }
}

}  // namespace

TEST_CASE("analytic gradients match finite differences, all families") {
    const std::vector<Family> families = {Family::gaussian(),
                                          Family::bernoulli(),
                                          Family::poisson()};
    std::uint64_t seed = 100;
    for (const Family& fa : families) {
        for (const Family& fb : families) {
            for (const Family& fy : {Family::gaussian(), Family::bernoulli(),
                                     Family::poisson()}) {
                check_gradients(make_instance({fa, fb}, fy, false, seed++),
                                1e-5);
            }
        }
    }
    // Covariates exercised separately for each outcome family.
    for (const Family& fy : families) {
        check_gradients(
            make_instance({Family::gaussian(), Family::poisson()}, fy, true,
                          seed++),
            1e-5);
    }
}

TEST_CASE("total loss adds the V penalty only") {
    Instance inst = make_instance({Family::gaussian(), Family::bernoulli()},
                                  Family::gaussian(), false, 42);
    const double smooth =
        loss_smooth(inst.views, inst.outcome, inst.params, inst.weights);
    CHECK(loss_total(inst.views, inst.outcome, inst.params, inst.weights) ==
          doctest::Approx(smooth));

    LossWeights penalized =
        make_weights(0.6, 0.25, static_cast<Eigen::Index>(inst.views.size()),
                     inst.params.K());
    double l1 = 0.0;
    for (const auto& V : inst.params.V) l1 += 0.25 * V.cwiseAbs().sum();
    CHECK(loss_total(inst.views, inst.outcome, inst.params, penalized) ==
          doctest::Approx(smooth + l1));
}

TEST_CASE("smooth loss equals the entrywise definition") {
    Instance inst = make_instance({Family::gaussian(), Family::poisson()},
                                  Family::bernoulli(), false, 77);
    const double rho = inst.weights.rho;
    const Eigen::Index n = inst.outcome.n();
    double expect = 0.0;
    for (std::size_t d = 0; d < inst.views.size(); ++d) {
        const Eigen::MatrixXd psi =
            natural_params_view(inst.params, static_cast<int>(d));
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < inst.views[d].p(); ++j)
                acc += nll_entry(inst.views[d].family,
                                 inst.views[d].data(i, j), psi(i, j));
        expect += rho * acc / (static_cast<double>(n) * inst.views[d].p());
    }
    const Eigen::VectorXd psi_y =
        natural_param_outcome(inst.params, inst.outcome);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += nll_entry(inst.outcome.family, inst.outcome.y(i), psi_y(i));
    }
    expect += (1.0 - rho) * acc / static_cast<double>(n);

    CHECK(loss_smooth(inst.views, inst.outcome, inst.params, inst.weights) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("unaveraged nll matches the raw double sum") {
    Instance inst = make_instance({Family::bernoulli(), Family::gaussian()},
                                  Family::gaussian(), false, 99);
    double expect = 0.0;
    for (std::size_t d = 0; d < inst.views.size(); ++d) {
        const Eigen::MatrixXd psi =
            natural_params_view(inst.params, static_cast<int>(d));
        for (Eigen::Index i = 0; i < psi.rows(); ++i)
            for (Eigen::Index j = 0; j < psi.cols(); ++j)
                expect += nll_entry(inst.views[d].family,
                                    inst.views[d].data(i, j), psi(i, j));
    }
    const Eigen::VectorXd psi_y =
        natural_param_outcome(inst.params, inst.outcome);
    for (Eigen::Index i = 0; i < psi_y.size(); ++i) {
        expect += nll_entry(inst.outcome.family, inst.outcome.y(i), psi_y(i));
    }
    CHECK(nll_unaveraged(inst.views, inst.outcome, inst.params) ==
          doctest::Approx(expect).epsilon(1e-12));
}
