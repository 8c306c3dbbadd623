#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sib/model.hpp"

namespace sib {

struct SimConfig {
    int n = 150;
    int p = 100;                   // variables per view, equal across views
    int n_views = 2;
    int K = 3;
    Eigen::VectorXd scale =        // singular-value-like block scales
        (Eigen::VectorXd(3) << 27.0, 15.0, 10.0).finished();
    double important_frac = 0.10;  // fraction of important variables per bicluster
    double sigma2_x = 1.0;
    Family outcome_family = Family::gaussian();
    Eigen::VectorXd beta_true;     // defaults by outcome family when empty
    std::uint64_t seed = 0;

    int important_per_bicluster() const {
        return static_cast<int>(important_frac * p);
    }
    Eigen::VectorXd effective_beta() const;
    void validate() const;
};

struct SimTruth {
    Eigen::VectorXi assignments;  // 1-based
    std::vector<std::vector<std::vector<int>>> variable_members;  // [d][k]
};

struct SimBundle {
    std::vector<ViewMatrix> train_views;
    OutcomeSpec train_outcome;
    SimTruth train_truth;
    std::vector<ViewMatrix> test_views;
    OutcomeSpec test_outcome;
    SimTruth test_truth;
};

// Gamma indicator: p x K, disjoint column supports with exactly l ones per
// column placed by a seeded shuffle.
Eigen::MatrixXi assign_gamma(int p, int K, int l, std::mt19937_64& rng);

// Draws train and test sets sharing V, Gamma, mu with fresh U, W per set.
SimBundle generate(const SimConfig& config);

}  // namespace sib
