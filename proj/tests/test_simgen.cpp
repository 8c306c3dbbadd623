#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "sib/simgen.hpp"

using namespace sib;

TEST_CASE("gamma columns are disjoint with exactly l ones") {
    std::mt19937_64 rng(9);
    const int p = 50, K = 3, l = 5;
    const Eigen::MatrixXi gamma = assign_gamma(p, K, l, rng);
    REQUIRE(gamma.rows() == p);
    REQUIRE(gamma.cols() == K);
    for (int k = 0; k < K; ++k) {
        CHECK(gamma.col(k).sum() == l);
    }
    for (int j = 0; j < p; ++j) {
        CHECK(gamma.row(j).sum() <= 1);
    }
}

TEST_CASE("generated bundle shapes and invariants") {
    SimConfig config;
    config.n = 40;
    config.p = 30;
    config.seed = 17;
    const SimBundle bundle = generate(config);

    REQUIRE(bundle.train_views.size() == 2);
    REQUIRE(bundle.test_views.size() == 2);
    CHECK(bundle.train_views[0].data.rows() == 40);
    CHECK(bundle.train_views[0].data.cols() == 30);
    CHECK(bundle.train_outcome.y.size() == 40);
    CHECK(bundle.test_outcome.y.size() == 40);

    // Every sample belongs to one of K groups; each group has >= 2 members.
    std::vector<int> counts(config.K, 0);
    for (Eigen::Index i = 0; i < bundle.train_truth.assignments.size(); ++i) {
        const int a = bundle.train_truth.assignments(i);
        REQUIRE(a >= 1);
        REQUIRE(a <= config.K);
        ++counts[a - 1];
    }
    for (int c : counts) CHECK(c >= 2);

    // Variable truth: disjoint groups of floor(0.1 * p) = 3 per bicluster,
    // shared between train and test.
    for (std::size_t d = 0; d < 2; ++d) {
        std::set<int> seen;
        for (int k = 0; k < config.K; ++k) {
            const auto& members = bundle.train_truth.variable_members[d][k];
            CHECK(static_cast<int>(members.size()) ==
                  config.important_per_bicluster());
            for (int j : members) {
                CHECK(!seen.count(j));
                seen.insert(j);
            }
            CHECK(members ==
                  bundle.test_truth.variable_members[d][k]);
        }
    }
}

TEST_CASE("same seed reproduces, different seed varies") {
    SimConfig config;
    config.n = 25;
    config.p = 20;
    config.seed = 4;
    const SimBundle a = generate(config);
    const SimBundle b = generate(config);
    CHECK((a.train_views[0].data - b.train_views[0].data).norm() == 0.0);
    CHECK((a.train_outcome.y - b.train_outcome.y).norm() == 0.0);
    CHECK((a.test_views[1].data - b.test_views[1].data).norm() == 0.0);

    config.seed = 5;
    const SimBundle c = generate(config);
    CHECK((a.train_views[0].data - c.train_views[0].data).norm() > 0.0);
}

TEST_CASE("bernoulli outcome uses the classification defaults") {
    SimConfig config;
    config.n = 60;
    config.p = 20;
    config.outcome_family = Family::bernoulli();
    config.seed = 8;
    CHECK(config.effective_beta()(0) == doctest::Approx(1.5));
    CHECK(config.effective_beta()(1) == doctest::Approx(0.0));
    CHECK(config.effective_beta()(2) == doctest::Approx(-1.5));
    const SimBundle bundle = generate(config);
    int ones = 0;
    for (Eigen::Index i = 0; i < bundle.train_outcome.y.size(); ++i) {
        const double y = bundle.train_outcome.y(i);
        CHECK((y == 0.0 || y == 1.0));
        ones += y == 1.0;
    }
    // Class-balance guard keeps both classes present.
    CHECK(ones > 0);
    CHECK(ones < 60);
}

TEST_CASE("gaussian outcome defaults and noise-free mode") {
    SimConfig config;
    CHECK(config.effective_beta()(0) == doctest::Approx(1.0));
    CHECK(config.effective_beta()(1) == doctest::Approx(-1.0));
    CHECK(config.effective_beta()(2) == doctest::Approx(-5.0));

    // sigma2 = 0 makes each view exactly its natural parameter matrix: the
    // per-bicluster block structure is noiseless.
    config.n = 30;
    config.p = 20;
    config.sigma2_x = 0.0;
    config.seed = 12;
    const SimBundle bundle = generate(config);
    const auto& members = bundle.train_truth.variable_members[0][0];
    // Unimportant variables carry only the intercept mu_j: constant columns.
    std::set<int> important;
    for (int k = 0; k < config.K; ++k) {
        for (int j : bundle.train_truth.variable_members[0][k]) {
            important.insert(j);
        }
    }
    const Eigen::MatrixXd& X = bundle.train_views[0].data;
    for (int j = 0; j < config.p; ++j) {
        if (important.count(j)) continue;
        for (Eigen::Index i = 1; i < X.rows(); ++i) {
            CHECK(X(i, j) == doctest::Approx(X(0, j)).epsilon(1e-12));
        }
    }
    CHECK(!members.empty());
}

TEST_CASE("config validation") {
    SimConfig config;
    config.K = 5;  // default beta covers only 3 components
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.beta_true = Eigen::VectorXd::Ones(5);
    config.scale = Eigen::VectorXd::Constant(5, 10.0);
    CHECK_NOTHROW(config.validate());
    config.beta_true = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(config.validate(), ConfigError);
}
