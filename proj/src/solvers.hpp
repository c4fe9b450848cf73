#pragma once

// Dense eigen- and singular-value drivers. Real input takes the real symmetric
// path, which is about twice as fast.

#include <Eigen/Dense>

namespace cqpolar::solvers {

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // empty when vectors were not requested
};

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a, bool want_vectors);

// Descending. Computed from the Hermitian dilation rather than a bidiagonal
// SVD, whose divide-and-conquer path in Eigen 3.4.0 misreports some
// rank-deficient inputs.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

}  // namespace cqpolar::solvers
