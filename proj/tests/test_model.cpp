#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "sib/model.hpp"

using namespace sib;

namespace {

ModelParams random_params(int n, std::vector<int> widths, int K,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto fill = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gauss(rng);
    };
    ModelParams params;
    params.U.resize(n, K);
    params.W.resize(n, K);
    fill(params.U);
    fill(params.W);
    for (int p : widths) {
        Eigen::MatrixXd V(p, K);
        fill(V);
        params.V.push_back(V);
        Eigen::VectorXd mu(p);
        for (int j = 0; j < p; ++j) mu(j) = gauss(rng);
        params.mu.push_back(mu);
    }
    params.beta.resize(K);
    for (int k = 0; k < K; ++k) params.beta(k) = gauss(rng);
    return params;
}

}  // namespace

TEST_CASE("natural parameters match the entrywise triple loop") {
    const int n = 9, K = 3;
    const std::vector<int> widths = {7, 5};
    const ModelParams params = random_params(n, widths, K, 21);
    for (std::size_t d = 0; d < widths.size(); ++d) {
        const Eigen::MatrixXd psi =
            natural_params_view(params, static_cast<int>(d));
        REQUIRE(psi.rows() == n);
        REQUIRE(psi.cols() == widths[d]);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < widths[d]; ++j) {
                double expect = params.mu[d](j);
                for (int k = 0; k < K; ++k) {
                    expect += params.U(i, k) * params.W(i, k) *
                              params.V[d](j, k);
                }
                CHECK(psi(i, j) == doctest::Approx(expect).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("outcome natural parameter with and without covariates") {
    const int n = 6, K = 2;
    ModelParams params = random_params(n, {4}, K, 5);
    OutcomeSpec outcome;
    outcome.y = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd psi = natural_param_outcome(params, outcome);
    for (int i = 0; i < n; ++i) {
        CHECK(psi(i) == doctest::Approx(params.W.row(i).dot(
                            params.beta.transpose())));
    }

    // With two covariates, beta extends by two entries.
    Eigen::MatrixXd X(n, 2);
    X.setRandom();
    outcome.covariates = X;
    Eigen::VectorXd beta_full(K + 2);
    beta_full << params.beta, 0.7, -1.1;
    params.beta = beta_full;
    psi = natural_param_outcome(params, outcome);
    for (int i = 0; i < n; ++i) {
        const double expect = params.W.row(i).head(K).dot(
                                  beta_full.head(K).transpose()) +
                              X.row(i).dot(beta_full.tail(2).transpose());
        CHECK(psi(i) == doctest::Approx(expect));
    }
}

TEST_CASE("hard assignment argmax with low-index ties") {
    Eigen::MatrixXd W(4, 3);
    W << 0.2, 0.5, 0.3,
         0.4, 0.4, 0.2,
         0.0, 0.0, 1.0,
         1.0 / 3, 1.0 / 3, 1.0 / 3;
    const Eigen::VectorXi a = hard_assign(W);
    CHECK(a(0) == 2);
    CHECK(a(1) == 1);  // tie -> lowest index
    CHECK(a(2) == 3);
    CHECK(a(3) == 1);  // three-way tie -> lowest index
}

TEST_CASE("variable membership overlapping vs non-overlapping") {
    Eigen::MatrixXd V(4, 2);
    V << 0.5, 0.0,
         0.3, -0.6,
         0.0, 0.0,
         -0.2, 0.2;  // |tie| -> lowest k in the non-overlapping rule
    const auto over = variable_membership({V}, false);
    REQUIRE(over.size() == 1);
    CHECK(over[0][0] == std::vector<int>{0, 1, 3});
    CHECK(over[0][1] == std::vector<int>{1, 3});

    const auto keep = variable_membership({V}, true);
    CHECK(keep[0][0] == std::vector<int>{0, 3});
    CHECK(keep[0][1] == std::vector<int>{1});

    const Eigen::MatrixXd pruned = keep_row_max_abs(V);
    CHECK(pruned(0, 0) == doctest::Approx(0.5));
    CHECK(pruned(1, 0) == 0.0);
    CHECK(pruned(1, 1) == doctest::Approx(-0.6));
    CHECK(pruned(2, 0) == 0.0);
    CHECK(pruned(2, 1) == 0.0);
    CHECK(pruned(3, 0) == doctest::Approx(-0.2));
    CHECK(pruned(3, 1) == 0.0);
}

TEST_CASE("input validation") {
    ViewMatrix view;
    view.data = Eigen::MatrixXd::Random(5, 3);
    view.family = Family::gaussian();
    view.name = "v";
    OutcomeSpec outcome;
    outcome.y = Eigen::VectorXd::Zero(5);
    CHECK_NOTHROW(validate_inputs({view}, outcome));

    // Sample-count mismatch across views.
    ViewMatrix other = view;
    other.data = Eigen::MatrixXd::Random(4, 3);
    CHECK_THROWS_AS(validate_inputs({view, other}, outcome), ShapeError);

    // Outcome length mismatch.
    OutcomeSpec bad = outcome;
    bad.y = Eigen::VectorXd::Zero(6);
    CHECK_THROWS_AS(validate_inputs({view}, bad), ShapeError);

    // Support violation: bernoulli view with a 0.5 entry.
    ViewMatrix bern = view;
    bern.family = Family::bernoulli();
    bern.data = Eigen::MatrixXd::Zero(5, 3);
    bern.data(2, 1) = 0.5;
    CHECK_THROWS_AS(validate_inputs({bern}, outcome), DataError);
    bern.data(2, 1) = 1.0;
    CHECK_NOTHROW(validate_inputs({bern}, outcome));

    // Covariate row mismatch.
    OutcomeSpec cov = outcome;
    cov.covariates = Eigen::MatrixXd::Zero(4, 2);
    CHECK_THROWS_AS(validate_inputs({view}, cov), ShapeError);
}
