#include "solvers.hpp"

#include <algorithm>
#include <stdexcept>

namespace cqpolar::solvers {
namespace {

bool imaginary_part_is_zero(const Eigen::MatrixXcd& a) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a.data()[k].imag() != 0.0) return false;
  }
  return true;
}

template <typename Solver>
void require_success(const Solver& s, const char* what) {
  if (s.info() != Eigen::Success) throw std::runtime_error(std::string(what) + " did not converge");
}

}  // namespace

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a, bool want_vectors) {
  HermitianEigen out;
  if (a.rows() == 0) return out;
  const int options = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (imaginary_part_is_zero(a)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(a.real(), options);
    require_success(s, "symmetric eigensolver");
    out.values = s.eigenvalues();
    if (want_vectors) out.vectors = s.eigenvectors().cast<std::complex<double>>();
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(a, options);
  require_success(s, "Hermitian eigensolver");
  out.values = s.eigenvalues();
  if (want_vectors) out.vectors = s.eigenvectors();
  return out;
}

// Eigenvalues of the Hermitian dilation [[0, A], [A^dagger, 0]] are the
// singular values of A with both signs, to absolute accuracy eps * ||A||.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const Eigen::Index count = std::min(rows, cols);
  if (count == 0) return Eigen::VectorXd(0);
  Eigen::VectorXd values;
  if (imaginary_part_is_zero(a)) {
    Eigen::MatrixXd dilation = Eigen::MatrixXd::Zero(rows + cols, rows + cols);
    dilation.topRightCorner(rows, cols) = a.real();
    dilation.bottomLeftCorner(cols, rows) = a.real().transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(dilation, Eigen::EigenvaluesOnly);
    require_success(s, "symmetric eigensolver");
    values = s.eigenvalues();
  } else {
    Eigen::MatrixXcd dilation = Eigen::MatrixXcd::Zero(rows + cols, rows + cols);
    dilation.topRightCorner(rows, cols) = a;
    dilation.bottomLeftCorner(cols, rows) = a.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(dilation, Eigen::EigenvaluesOnly);
    require_success(s, "Hermitian eigensolver");
    values = s.eigenvalues();
  }
  // Ascending; the largest `count` values are the singular values.
  Eigen::VectorXd out = values.tail(count).reverse().cwiseMax(0.0);
  return out;
}

}  // namespace cqpolar::solvers
