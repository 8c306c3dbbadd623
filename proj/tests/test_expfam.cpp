#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "sib/expfam.hpp"

using namespace sib;

TEST_CASE("cumulant closed forms") {
    CHECK(cumulant(Family::gaussian(), 3.0) == doctest::Approx(4.5));
    CHECK(cumulant(Family::bernoulli(), 0.0) ==
          doctest::Approx(std::log(2.0)));
    CHECK(cumulant(Family::poisson(), 1.0) == doctest::Approx(std::exp(1.0)));
    // Stable Bernoulli form must agree with the naive one where it is safe.
    for (double psi : {-20.0, -3.0, -0.5, 0.0, 0.5, 3.0, 20.0}) {
        CHECK(cumulant(Family::bernoulli(), psi) ==
              doctest::Approx(std::log1p(std::exp(psi))).epsilon(1e-12));
    }
    // ... and not overflow where the naive one would.
    CHECK(cumulant(Family::bernoulli(), 800.0) == doctest::Approx(800.0));
    CHECK(std::isfinite(cumulant(Family::bernoulli(), -800.0)));
}

TEST_CASE("mean link is the cumulant derivative (finite differences)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    const double h = 1e-6;
    for (const Family& f :
         {Family::gaussian(), Family::bernoulli(), Family::poisson()}) {
        for (int i = 0; i < 200; ++i) {
            const double psi = unif(rng);
            const double fd =
                (cumulant(f, psi + h) - cumulant(f, psi - h)) / (2 * h);
            CHECK(mean_link(f, psi) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("nll entry composition") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double psi = unif(rng);
        const double x = std::abs(unif(rng));
        for (const Family& f :
             {Family::gaussian(), Family::bernoulli(), Family::poisson()}) {
            CHECK(nll_entry(f, x, psi) ==
                  doctest::Approx(-x * psi + cumulant(f, psi)));
        }
    }
}

TEST_CASE("initialization transforms") {
    CHECK(init_transform(Family::gaussian(), 1.7) == doctest::Approx(1.7));
    // logit((x+1)/3) at x = 0.5 -> logit(0.5) = 0
    CHECK(init_transform(Family::bernoulli(), 0.5) == doctest::Approx(0.0));
    CHECK(init_transform(Family::bernoulli(), 1.0) ==
          doctest::Approx(std::log((2.0 / 3.0) / (1.0 - 2.0 / 3.0))));
    CHECK(init_transform(Family::poisson(), 0.0) == doctest::Approx(0.0));
    CHECK(init_transform(Family::poisson(), std::exp(2.0) - 1.0) ==
          doctest::Approx(2.0));
    // negbin r=5, x=3: logit((3+1)/(5+3+2)) = logit(0.4)
    const Family nb = Family::parse("negbin:5");
    CHECK(init_transform(nb, 3.0) ==
          doctest::Approx(std::log(0.4 / 0.6)));
}

TEST_CASE("negbin is init-only") {
    const Family nb = Family::parse("negbin:4");
    CHECK(!nb.likelihood_capable());
    CHECK(nb.failures() == 4);
    CHECK_THROWS_AS(cumulant(nb, 0.5), ConfigError);
    CHECK_THROWS_AS(mean_link(nb, 0.5), ConfigError);
    CHECK_THROWS_AS(nll_entry(nb, 1.0, 0.5), ConfigError);
}

TEST_CASE("parse and name round trip") {
    for (const std::string& s : {"gaussian", "bernoulli", "poisson"}) {
        CHECK(Family::parse(s).name() == s);
    }
    CHECK(Family::parse("negbin:7").name() == "negbin:7");
    CHECK_THROWS_AS(Family::parse("gamma"), ConfigError);
    CHECK_THROWS_AS(Family::parse("negbin:0"), ConfigError);
}

TEST_CASE("support checks") {
    CHECK(in_support(Family::gaussian(), -3.2));
    CHECK(in_support(Family::bernoulli(), 0.0));
    CHECK(in_support(Family::bernoulli(), 1.0));
    CHECK(!in_support(Family::bernoulli(), 0.5));
    CHECK(in_support(Family::poisson(), 4.0));
    CHECK(!in_support(Family::poisson(), -1.0));
    CHECK(!in_support(Family::poisson(), 2.5));
}
