#include "sib/projections.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sib/errors.hpp"

namespace sib {

Eigen::VectorXd project_unit_norm(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw DataError("project_unit_norm: empty vector");
    const double norm = v.norm();
    if (norm < 1e-12) {
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(v.size());
        e1(0) = 1.0;
        return e1;
    }
    return v / norm;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    if (n == 0) throw DataError("project_simplex: empty vector");

    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());

    double cumsum = 0.0;
    double theta = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumsum += u[j];
        const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) {
            theta = t;
        }
    }
    return (v.array() - theta).max(0.0);
}

double soft_threshold(double z, double lam) {
    if (lam < 0.0) throw DataError("soft_threshold: negative lambda");
    if (z >= lam) return z - lam;
    if (z < -lam) return z + lam;
    return 0.0;
}

}  // namespace sib
