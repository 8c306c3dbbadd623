#include "sib/metrics.hpp"

#include <cmath>

#include "sib/errors.hpp"

namespace sib {

MembershipMatrix MembershipMatrix::from_sets(
    Eigen::Index n, Eigen::Index p, const std::vector<int>& samples,
    const std::vector<int>& variables) {
    MembershipMatrix m;
    m.entries = Eigen::MatrixXi::Zero(n, p);
    for (int i : samples) {
        for (int j : variables) {
            m.entries(i, j) = 1;
        }
    }
    return m;
}

BiclusterSet membership_matrices(
    const Eigen::VectorXi& assignments,
    const std::vector<std::vector<std::vector<int>>>& variable_members,
    const std::vector<Eigen::Index>& view_widths) {
    const Eigen::Index n = assignments.size();
    BiclusterSet set;
    for (std::size_t d = 0; d < variable_members.size(); ++d) {
        std::vector<MembershipMatrix> per_view;
        for (std::size_t k = 0; k < variable_members[d].size(); ++k) {
            std::vector<int> samples;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (assignments(i) == static_cast<int>(k) + 1) {
                    samples.push_back(static_cast<int>(i));
                }
            }
            per_view.push_back(MembershipMatrix::from_sets(
                n, view_widths[d], samples, variable_members[d][k]));
        }
        set.push_back(std::move(per_view));
    }
    return set;
}

double jaccard(const MembershipMatrix& a, const MembershipMatrix& b) {
    if (a.entries.rows() != b.entries.rows() ||
        a.entries.cols() != b.entries.cols()) {
        throw ShapeError("jaccard: membership matrices differ in shape");
    }
    long inter = 0;
    long uni = 0;
    for (Eigen::Index j = 0; j < a.entries.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.entries.rows(); ++i) {
            const bool in_a = a.entries(i, j) != 0;
            const bool in_b = b.entries(i, j) != 0;
            inter += (in_a && in_b) ? 1 : 0;
            uni += (in_a || in_b) ? 1 : 0;
        }
    }
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

BiclusterAccuracy relevance_recovery_f(const BiclusterSet& estimated,
                                       const BiclusterSet& truth) {
    if (estimated.size() != truth.size()) {
        throw ShapeError("relevance_recovery_f: view counts differ");
    }
    const double n_views = static_cast<double>(estimated.size());
    bool any_estimated = false;
    for (const auto& per_view : estimated) {
        if (!per_view.empty()) any_estimated = true;
    }
    if (!any_estimated) return {};

    double relevance = 0.0;
    double recovery = 0.0;
    for (std::size_t d = 0; d < estimated.size(); ++d) {
        const auto& est = estimated[d];
        const auto& tru = truth[d];
        double rel_view = 0.0;
        for (const auto& mk : est) {
            double best = 0.0;
            for (const auto& mt : tru) best = std::max(best, jaccard(mk, mt));
            rel_view += best;
        }
        relevance += rel_view / static_cast<double>(est.size());

        double rec_view = 0.0;
        for (const auto& mt : tru) {
            double best = 0.0;
            for (const auto& mk : est) best = std::max(best, jaccard(mk, mt));
            rec_view += best;
        }
        recovery += rec_view / static_cast<double>(tru.size());
    }
    BiclusterAccuracy acc;
    acc.relevance = relevance / n_views;
    acc.recovery = recovery / n_views;
    acc.f_score = (acc.relevance + acc.recovery) > 0.0
                      ? 2.0 * acc.relevance * acc.recovery /
                            (acc.relevance + acc.recovery)
                      : 0.0;
    return acc;
}

FpFn fp_fn(const BiclusterSet& estimated, const BiclusterSet& truth) {
    if (estimated.size() != truth.size()) {
        throw ShapeError("fp_fn: view counts differ");
    }
    double fp_total = 0.0;
    double fn_total = 0.0;
    long rows_total = 0;
    for (std::size_t d = 0; d < estimated.size(); ++d) {
        const auto& est = estimated[d];
        const auto& tru = truth[d];
        for (const auto& mt : tru) {
            double fp_min = 1.0;
            double fn_min = 1.0;
            for (const auto& mk : est) {
                const Eigen::Index n = mk.entries.rows();
                const Eigen::Index p = mk.entries.cols();
                long fp_count = 0;
                long fn_count = 0;
                for (Eigen::Index j = 0; j < p; ++j) {
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const bool in_est = mk.entries(i, j) != 0;
                        const bool in_tru = mt.entries(i, j) != 0;
                        fp_count += (in_est && !in_tru) ? 1 : 0;
                        fn_count += (!in_est && in_tru) ? 1 : 0;
                    }
                }
                const double cells = static_cast<double>(n * p);
                fp_min = std::min(fp_min, static_cast<double>(fp_count) / cells);
                fn_min = std::min(fn_min, static_cast<double>(fn_count) / cells);
            }
            fp_total += fp_min;
            fn_total += fn_min;
            ++rows_total;
        }
    }
    FpFn out;
    if (rows_total > 0) {
        out.false_positive = fp_total / static_cast<double>(rows_total);
        out.false_negative = fn_total / static_cast<double>(rows_total);
    }
    return out;
}

double outcome_error(const Eigen::VectorXd& y_true,
                     const Eigen::VectorXd& y_pred, const Family& family) {
    if (y_true.size() != y_pred.size()) {
        throw ShapeError("outcome_error: length mismatch");
    }
    if (family.kind() == Family::Kind::Bernoulli) {
        double wrong = 0.0;
        for (Eigen::Index i = 0; i < y_true.size(); ++i) {
            const double pred_class = y_pred(i) >= 0.5 ? 1.0 : 0.0;
            if (pred_class != y_true(i)) wrong += 1.0;
        }
        return wrong / static_cast<double>(y_true.size());
    }
    return (y_true - y_pred).squaredNorm() /
           static_cast<double>(y_true.size());
}

}  // namespace sib
