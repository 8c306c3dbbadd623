#pragma once

#include <Eigen/Dense>

namespace sib {

// v / |v|_2; a (near-)zero vector maps to the first standard basis vector so
// the optimizer stays total.
Eigen::VectorXd project_unit_norm(const Eigen::VectorXd& v);

// Euclidean projection onto the probability simplex, sort-based pivot method.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

// Soft threshold S(z, lam): z-lam for z>=lam, 0 inside [-lam, lam), z+lam below.
double soft_threshold(double z, double lam);

}  // namespace sib
