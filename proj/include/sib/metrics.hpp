#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sib/expfam.hpp"

namespace sib {

// Binary n x p indicator of one bicluster in one view: entry (i,j) is 1 iff
// sample i and variable j both belong to the bicluster.
struct MembershipMatrix {
    Eigen::MatrixXi entries;

    static MembershipMatrix from_sets(Eigen::Index n, Eigen::Index p,
                                      const std::vector<int>& samples,
                                      const std::vector<int>& variables);
    long count() const { return entries.cast<long>().sum(); }
};

// Per view, a list of membership matrices (one per bicluster).
using BiclusterSet = std::vector<std::vector<MembershipMatrix>>;

// Builds a BiclusterSet from hard sample assignments (1-based) and per-view
// per-bicluster variable index lists.
BiclusterSet membership_matrices(
    const Eigen::VectorXi& assignments,
    const std::vector<std::vector<std::vector<int>>>& variable_members,
    const std::vector<Eigen::Index>& view_widths);

// |A n B| / |A u B| over 1-entries; 0 when both are empty.
double jaccard(const MembershipMatrix& a, const MembershipMatrix& b);

struct BiclusterAccuracy {
    double relevance = 0.0;
    double recovery = 0.0;
    double f_score = 0.0;
};

// Relevance: mean over views and estimated biclusters of the best Jaccard
// against any true bicluster. Recovery: the transpose direction. F-score:
// harmonic mean. An empty estimated set yields all zeros.
BiclusterAccuracy relevance_recovery_f(const BiclusterSet& estimated,
                                       const BiclusterSet& truth);

struct FpFn {
    double false_positive = 0.0;
    double false_negative = 0.0;
};

// Pairwise mean-entry FP/FN matrices with rows indexed by true biclusters,
// row minima, then the mean over rows and views.
FpFn fp_fn(const BiclusterSet& estimated, const BiclusterSet& truth);

// Gaussian: mean squared error. Bernoulli: misclassification rate with
// predictions thresholded at 0.5.
double outcome_error(const Eigen::VectorXd& y_true,
                     const Eigen::VectorXd& y_pred, const Family& family);

}  // namespace sib
