#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "sib/metrics.hpp"
#include "sib/predict.hpp"
#include "sib/simgen.hpp"

using namespace sib;

namespace {

struct Fixture {
    SimBundle bundle;
    FitConfig config;
    BiclusterResult fitted;
};

Fixture fitted_fixture(std::uint64_t seed,
                       const Family& outcome = Family::gaussian()) {
    Fixture fx;
    SimConfig sim;
    sim.n = 60;
    sim.p = 40;
    sim.seed = seed;
    sim.outcome_family = outcome;
    fx.bundle = generate(sim);

    fx.config.K = 3;
    fx.config.alpha = 5e-2;
    fx.config.max_iter = 800;
    fx.config.non_overlapping = true;
    fx.config.weights = make_weights(0.5, 0.01, 2, 3);
    fx.fitted = fit(fx.bundle.train_views, fx.bundle.train_outcome, fx.config);
    return fx;
}

}  // namespace

TEST_CASE("prediction output invariants") {
    const Fixture fx = fitted_fixture(1);
    const PredictionResult pred = predict(fx.bundle.test_views, fx.fitted,
                                          Family::gaussian(), fx.config);
    REQUIRE(pred.W_new.rows() == 60);
    REQUIRE(pred.W_new.cols() == 3);
    for (Eigen::Index i = 0; i < pred.W_new.rows(); ++i) {
        CHECK(pred.W_new.row(i).sum() == doctest::Approx(1.0));
        CHECK(pred.W_new.row(i).minCoeff() >= -1e-12);
    }
    for (Eigen::Index k = 0; k < pred.U_new.cols(); ++k) {
        CHECK(pred.U_new.col(k).norm() == doctest::Approx(1.0));
    }
    CHECK(pred.assignments.minCoeff() >= 1);
    CHECK(pred.assignments.maxCoeff() <= 3);
    // psi then mean link: gaussian identity.
    CHECK((pred.y_hat - pred.psi_y_hat).norm() < 1e-14);
    CHECK(pred.loss_trace.size() >= 2);
    CHECK(pred.loss_trace.back() <= pred.loss_trace.front());
}

TEST_CASE("prediction beats the null on simulated data") {
    const Fixture fx = fitted_fixture(2);
    const PredictionResult pred = predict(fx.bundle.test_views, fx.fitted,
                                          Family::gaussian(), fx.config);
    const Eigen::VectorXd& y = fx.bundle.test_outcome.y;
    const double mse = outcome_error(y, pred.y_hat, Family::gaussian());
    const Eigen::VectorXd null_pred =
        Eigen::VectorXd::Constant(y.size(), y.mean());
    const double null_mse = outcome_error(y, null_pred, Family::gaussian());
    CHECK(mse < null_mse);
}

TEST_CASE("bernoulli predictions live on the probability scale") {
    const Fixture fx = fitted_fixture(3, Family::bernoulli());
    const PredictionResult pred = predict(fx.bundle.test_views, fx.fitted,
                                          Family::bernoulli(), fx.config);
    for (Eigen::Index i = 0; i < pred.y_hat.size(); ++i) {
        CHECK(pred.y_hat(i) >= 0.0);
        CHECK(pred.y_hat(i) <= 1.0);
    }
    const double err = outcome_error(fx.bundle.test_outcome.y, pred.y_hat,
                                     Family::bernoulli());
    CHECK(err < 0.5);  // better than a coin
}

TEST_CASE("training data approximately reproduces the training structure") {
    const Fixture fx = fitted_fixture(4);
    // Predicting on the training views should land most samples in the same
    // biclusters the fit assigned.
    const PredictionResult pred = predict(fx.bundle.train_views, fx.fitted,
                                          Family::gaussian(), fx.config);
    int agree = 0;
    for (Eigen::Index i = 0; i < pred.assignments.size(); ++i) {
        agree += pred.assignments(i) == fx.fitted.assignments(i);
    }
    CHECK(agree >= 54);  // 90% of 60
}

TEST_CASE("shape mismatches are rejected") {
    const Fixture fx = fitted_fixture(5);
    std::vector<ViewMatrix> bad = fx.bundle.test_views;
    bad[1].data = bad[1].data.leftCols(20).eval();
    CHECK_THROWS_AS(
        predict(bad, fx.fitted, Family::gaussian(), fx.config), ShapeError);
    std::vector<ViewMatrix> missing = {fx.bundle.test_views[0]};
    CHECK_THROWS_AS(predict(missing, fx.fitted, Family::gaussian(), fx.config),
                    ShapeError);
}

TEST_CASE("covariate handling in prediction") {
    // Fit with covariates, then require them at prediction time.
    SimConfig sim;
    sim.n = 50;
    sim.p = 30;
    sim.seed = 6;
    SimBundle bundle = generate(sim);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(50, 2);
    bundle.train_outcome.covariates = X;

    FitConfig fc;
    fc.K = 3;
    fc.alpha = 5e-2;
    fc.max_iter = 300;
    fc.weights = make_weights(0.5, 0.0, 2, 3);
    const BiclusterResult fitted =
        fit(bundle.train_views, bundle.train_outcome, fc);
    REQUIRE(fitted.beta_hat.size() == 5);

    CHECK_THROWS_AS(
        predict(bundle.test_views, fitted, Family::gaussian(), fc),
        ShapeError);
    Eigen::MatrixXd X_new = Eigen::MatrixXd::Random(50, 2);
    const PredictionResult pred = predict(bundle.test_views, fitted,
                                          Family::gaussian(), fc, X_new);
    CHECK(pred.psi_y_hat.size() == 50);
    // psi includes the covariate part.
    const Eigen::VectorXd expect =
        pred.W_new * fitted.beta_hat.head(3) + X_new * fitted.beta_hat.tail(2);
    CHECK((pred.psi_y_hat - expect).norm() < 1e-12);
}

TEST_CASE("beta alignment matches nearest coefficients greedily") {
    Eigen::VectorXd base(3), other(3);
    base << 1.0, -1.0, -5.0;
    other << -5.1, 1.2, -0.9;
    const std::vector<int> mapping = align_biclusters_by_beta(base, other);
    REQUIRE(mapping.size() == 3);
    CHECK(mapping[0] == 2);  // -5.1 -> -5.0
    CHECK(mapping[1] == 0);  // 1.2 -> 1.0
    CHECK(mapping[2] == 1);  // -0.9 -> -1.0
}
