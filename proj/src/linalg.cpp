#include "cqpolar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "solvers.hpp"

namespace cqpolar {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw LinalgError(os.str());
  }
}

bool matrix_is_real(const Matrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (m.data()[k].imag() != 0.0) return false;
  }
  return true;
}

// Eigenvalues at or below this are numerically indistinguishable from zero
// for a PSD matrix of the given size and scale.
double numerical_zero(const RealVector& values) {
  if (values.size() == 0) return 0.0;
  const double scale = std::max(values.maxCoeff(), 0.0);
  return scale * static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon();
}

}  // namespace

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tolerance) return false;
    }
  }
  return true;
}

HermitianMatrix::HermitianMatrix(const Matrix& m, double tolerance) {
  require_square(m, "HermitianMatrix");
  if (!is_hermitian(m, tolerance)) {
    throw LinalgError("HermitianMatrix: input is not Hermitian within tolerance");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::operator-() const { return HermitianMatrix(-m_, Trusted{}); }

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw LinalgError("HermitianMatrix +: dimension mismatch");
  return HermitianMatrix(a.m_ + b.m_, HermitianMatrix::Trusted{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw LinalgError("HermitianMatrix -: dimension mismatch");
  return HermitianMatrix(a.m_ - b.m_, HermitianMatrix::Trusted{});
}

Spectrum eig_hermitian(const HermitianMatrix& m) {
  auto e = solvers::hermitian_eigen(m.matrix(), true);
  return Spectrum{std::move(e.values), std::move(e.vectors)};
}

RealVector eigenvalues_hermitian(const HermitianMatrix& m) {
  return solvers::hermitian_eigen(m.matrix(), false).values;
}

RealVector singular_values(const Matrix& m) { return solvers::singular_values(m); }

double trace_norm(const Matrix& m) {
  require_square(m, "trace_norm");
  return solvers::singular_values(m).sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DensityOperator

struct DensityOperator::Rep {
  bool diagonal = false;
  bool real = true;
  RealVector diag;  // diagonal storage
  Spectrum spectrum;  // dense storage
  RealVector eigenvalues;  // ascending, both storages
};

namespace {

std::shared_ptr<DensityOperator::Rep> make_dense_rep(Matrix m) {
  auto rep = std::make_shared<DensityOperator::Rep>();
  rep->real = matrix_is_real(m);
  auto e = solvers::hermitian_eigen(m, true);
  rep->eigenvalues = e.values;
  rep->spectrum = Spectrum{std::move(e.values), std::move(e.vectors)};
  return rep;
}

std::shared_ptr<DensityOperator::Rep> make_diagonal_rep(RealVector p) {
  auto rep = std::make_shared<DensityOperator::Rep>();
  rep->diagonal = true;
  rep->eigenvalues = p;
  std::sort(rep->eigenvalues.data(), rep->eigenvalues.data() + rep->eigenvalues.size());
  rep->diag = std::move(p);
  return rep;
}

void validate_spectrum(const RealVector& values, const char* what) {
  if (values.size() == 0) throw LinalgError(std::string(what) + ": empty operator");
  if (values.minCoeff() < -kNegativeEigenvalueTolerance) {
    std::ostringstream os;
    os << what << ": eigenvalue " << values.minCoeff() << " below -1e-10";
    throw LinalgError(os.str());
  }
  if (std::abs(values.sum() - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << what << ": trace " << values.sum() << " differs from 1";
    throw LinalgError(os.str());
  }
}

}  // namespace

DensityOperator DensityOperator::from_matrix(const Matrix& m) {
  require_square(m, "DensityOperator");
  if (!is_hermitian(m, kHermitianTolerance)) {
    throw LinalgError("DensityOperator: matrix is not Hermitian within 1e-12");
  }
  Matrix h = (m + m.adjoint()) * 0.5;
  auto rep = make_dense_rep(std::move(h));
  validate_spectrum(rep->eigenvalues, "DensityOperator");
  return DensityOperator(std::move(rep));
}

DensityOperator DensityOperator::diagonal(const RealVector& probabilities) {
  validate_spectrum(probabilities, "DensityOperator::diagonal");
  return DensityOperator(make_diagonal_rep(probabilities));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw LinalgError("DensityOperator::pure: zero vector");
  ComplexVector v = psi / norm;
  return from_trusted(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw LinalgError("DensityOperator::maximally_mixed: dim must be positive");
  return DensityOperator(make_diagonal_rep(RealVector::Constant(dim, 1.0 / static_cast<double>(dim))));
}

DensityOperator DensityOperator::from_trusted(Matrix m) {
  return DensityOperator(make_dense_rep(std::move(m)));
}

DensityOperator DensityOperator::from_trusted_diagonal(RealVector p) {
  return DensityOperator(make_diagonal_rep(std::move(p)));
}

Eigen::Index DensityOperator::dim() const { return rep_->eigenvalues.size(); }
bool DensityOperator::is_diagonal() const { return rep_->diagonal; }
bool DensityOperator::is_real() const { return rep_->real; }

Matrix DensityOperator::dense() const {
  if (rep_->diagonal) return rep_->diag.cast<Complex>().asDiagonal();
  const auto& s = rep_->spectrum;
  return s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

const RealVector& DensityOperator::diagonal_entries() const {
  if (!rep_->diagonal) throw LinalgError("DensityOperator: not diagonal storage");
  return rep_->diag;
}

const RealVector& DensityOperator::eigenvalues() const { return rep_->eigenvalues; }

const Spectrum& DensityOperator::spectrum() const {
  if (rep_->diagonal) throw LinalgError("DensityOperator: spectrum() requires dense storage");
  return rep_->spectrum;
}

Matrix DensityOperator::sqrt() const {
  if (rep_->diagonal) {
    return rep_->diag.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal();
  }
  // Eigenvalues at roundoff level are exact zeros; their square roots (~1e-8)
  // would otherwise decide which side of a projector the kernel falls on.
  const auto& s = rep_->spectrum;
  const double floor = kSqrtZeroCutoff * std::max(1.0, s.values.cwiseAbs().maxCoeff());
  RealVector root = s.values.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  return s.vectors * root.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

namespace {

RealVector kron_diagonal(const RealVector& p, const RealVector& q) {
  RealVector out(p.size() * q.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out.segment(i * q.size(), q.size()) = p(i) * q;
  return out;
}

}  // namespace

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  if (a.is_diagonal() && b.is_diagonal()) {
    return DensityOperator::from_trusted_diagonal(kron_diagonal(a.diagonal_entries(), b.diagonal_entries()));
  }
  return DensityOperator::from_trusted(kron(a.dense(), b.dense()));
}

DensityOperator average_of_products(const DensityOperator& a0, const DensityOperator& b0,
                                    const DensityOperator& a1, const DensityOperator& b1) {
  if (a0.dim() != a1.dim() || b0.dim() != b1.dim()) throw LinalgError("average_of_products: dimension mismatch");
  if (a0.is_diagonal() && b0.is_diagonal() && a1.is_diagonal() && b1.is_diagonal()) {
    return DensityOperator::from_trusted_diagonal(
        0.5 * (kron_diagonal(a0.diagonal_entries(), b0.diagonal_entries()) +
               kron_diagonal(a1.diagonal_entries(), b1.diagonal_entries())));
  }
  Matrix m = kron(a0.dense(), b0.dense());
  m += kron(a1.dense(), b1.dense());
  m *= 0.5;
  return DensityOperator::from_trusted(std::move(m));
}

DensityOperator average(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw LinalgError("average: dimension mismatch");
  if (a.is_diagonal() && b.is_diagonal()) {
    return DensityOperator::from_trusted_diagonal(0.5 * (a.diagonal_entries() + b.diagonal_entries()));
  }
  return DensityOperator::from_trusted(0.5 * (a.dense() + b.dense()));
}

double frobenius_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw LinalgError("frobenius_distance: dimension mismatch");
  if (a.same_storage(b)) return 0.0;
  if (a.is_diagonal() && b.is_diagonal()) {
    return (a.diagonal_entries() - b.diagonal_entries()).norm();
  }
  return (a.dense() - b.dense()).norm();
}

DensityOperator permute_basis(const DensityOperator& rho, std::span<const Eigen::Index> perm) {
  if (static_cast<Eigen::Index>(perm.size()) != rho.dim()) throw LinalgError("permute_basis: size mismatch");
  auto rep = std::make_shared<DensityOperator::Rep>(*rho.rep_);
  if (rep->diagonal) {
    for (Eigen::Index i = 0; i < rho.dim(); ++i) rep->diag(i) = rho.rep_->diag(perm[static_cast<std::size_t>(i)]);
  } else {
    const Matrix& v = rho.rep_->spectrum.vectors;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) rep->spectrum.vectors.row(i) = v.row(perm[static_cast<std::size_t>(i)]);
  }
  return DensityOperator(std::move(rep));
}

DensityOperator swap_tensor_factors(const DensityOperator& rho, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (dim_a * dim_b != rho.dim()) throw LinalgError("swap_tensor_factors: dimension mismatch");
  // new index (b, a) reads old index (a, b)
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index b = 0; b < dim_b; ++b) {
    for (Eigen::Index a = 0; a < dim_a; ++a) perm[static_cast<std::size_t>(b * dim_a + a)] = a * dim_b + b;
  }
  return permute_basis(rho, perm);
}

Matrix matrix_sqrt(const HermitianMatrix& m) {
  const Spectrum s = eig_hermitian(m);
  if (s.values.size() > 0 && s.values.minCoeff() < -kNegativeEigenvalueTolerance) {
    throw LinalgError("matrix_sqrt: eigenvalue below -1e-10, not a positive operator");
  }
  RealVector root = s.values.cwiseMax(0.0).cwiseSqrt();
  return s.vectors * root.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

double root_fidelity(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw LinalgError("fidelity: dimension mismatch");
  if (a.is_diagonal() && b.is_diagonal()) {
    const auto& p = a.diagonal_entries();
    const auto& q = b.diagonal_entries();
    double s = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) s += std::sqrt(std::max(p(k), 0.0) * std::max(q(k), 0.0));
    return s;
  }
  // With a = Ua Da^2 Ua^dagger restricted to its support (likewise b), the
  // singular values of sqrt(a) sqrt(b) are those of Da (Ua^dagger Ub) Db.
  auto support = [](const DensityOperator& rho, Matrix& basis, RealVector& roots) {
    if (rho.is_diagonal()) {
      const auto& p = rho.diagonal_entries();
      const double cut = numerical_zero(p);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index k = 0; k < p.size(); ++k) if (p(k) > cut) keep.push_back(k);
      basis = Matrix::Zero(p.size(), static_cast<Eigen::Index>(keep.size()));
      roots.resize(static_cast<Eigen::Index>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c) {
        basis(keep[c], static_cast<Eigen::Index>(c)) = 1.0;
        roots(static_cast<Eigen::Index>(c)) = std::sqrt(p(keep[c]));
      }
      return;
    }
    const auto& s = rho.spectrum();
    const double cut = numerical_zero(s.values);
    Eigen::Index first = 0;
    while (first < s.values.size() && s.values(first) <= cut) ++first;
    const Eigen::Index rank = s.values.size() - first;
    basis = s.vectors.rightCols(rank);
    roots = s.values.tail(rank).cwiseSqrt();
  };
  Matrix ua, ub;
  RealVector ra, rb;
  support(a, ua, ra);
  support(b, ub, rb);
  if (ra.size() == 0 || rb.size() == 0) return 0.0;
  Matrix core = ra.cast<Complex>().asDiagonal() * (ua.adjoint() * ub) * rb.cast<Complex>().asDiagonal();
  return solvers::singular_values(core).sum();
}

double fidelity(const DensityOperator& a, const DensityOperator& b) {
  const double r = root_fidelity(a, b);
  return r * r;
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > kEntropyCutoff) h -= p * std::log2(p);
  }
  return h;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const auto& v = rho.eigenvalues();
  return shannon_entropy(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw LinalgError("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// ---------------------------------------------------------------------------
// Projectors

ProjectorMatrix::ProjectorMatrix(const Matrix& m) {
  require_square(m, "ProjectorMatrix");
  if (!is_hermitian(m, kIdempotenceTolerance)) {
    throw LinalgError("ProjectorMatrix: not Hermitian");
  }
  if ((m * m - m).norm() > kIdempotenceTolerance) {
    throw LinalgError("ProjectorMatrix: P*P differs from P");
  }
  p_ = (m + m.adjoint()) * 0.5;
}

ProjectorMatrix ProjectorMatrix::identity(Eigen::Index dim) {
  return ProjectorMatrix(Matrix::Identity(dim, dim), Trusted{});
}

ProjectorMatrix ProjectorMatrix::from_orthonormal_columns(const Matrix& columns, Eigen::Index dim) {
  if (columns.cols() == 0) return ProjectorMatrix(Matrix::Zero(dim, dim), Trusted{});
  return ProjectorMatrix(columns * columns.adjoint(), Trusted{});
}

ProjectorMatrix ProjectorMatrix::complement() const {
  return ProjectorMatrix(Matrix::Identity(dim(), dim()) - p_, Trusted{});
}

ProjectorMatrix eigenspace_projector(const HermitianMatrix& m, EigenspaceSign sign,
                                     double zero_tolerance) {
  const Spectrum s = eig_hermitian(m);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const double v = s.values(k);
    const bool take = (sign == EigenspaceSign::kNonNegative && v >= -zero_tolerance) ||
                      (sign == EigenspaceSign::kStrictlyPositive && v > zero_tolerance) ||
                      (sign == EigenspaceSign::kStrictlyNegative && v < -zero_tolerance);
    if (take) keep.push_back(k);
  }
  Matrix cols(m.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = s.vectors.col(keep[c]);
  return ProjectorMatrix::from_orthonormal_columns(cols, m.dim());
}

ProjectorMatrix positive_eigenspace_projector(const HermitianMatrix& m, double zero_tolerance) {
  return eigenspace_projector(m, EigenspaceSign::kNonNegative, zero_tolerance);
}

// ---------------------------------------------------------------------------
// ProductState

ProductState::ProductState(DensityOperator single)
    : factors_{std::move(single)}, dim_(static_cast<std::size_t>(factors_.front().dim())) {}

ProductState ProductState::tensor(const ProductState& a, const ProductState& b) {
  ProductState out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  out.factors_.insert(out.factors_.end(), a.factors_.begin(), a.factors_.end());
  out.factors_.insert(out.factors_.end(), b.factors_.begin(), b.factors_.end());
  out.dim_ = a.dim_ * b.dim_;
  return out;
}

bool ProductState::is_diagonal() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const auto& f) { return f.is_diagonal(); });
}

bool ProductState::is_real() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const auto& f) { return f.is_real(); });
}

bool ProductState::aligned_with(const ProductState& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].dim() != other.factors_[k].dim()) return false;
  }
  return true;
}

DensityOperator ProductState::materialize(std::size_t dense_cap) const {
  if (factors_.size() == 1) return factors_.front();
  if (!is_diagonal() && dim_ > dense_cap) {
    std::ostringstream os;
    os << "ProductState: dense dimension " << dim_ << " exceeds cap " << dense_cap;
    throw LinalgError(os.str());
  }
  DensityOperator acc = factors_.front();
  for (std::size_t k = 1; k < factors_.size(); ++k) acc = kron(acc, factors_[k]);
  return acc;
}

double von_neumann_entropy(const ProductState& rho) {
  double h = 0.0;
  for (const auto& f : rho.factors()) h += von_neumann_entropy(f);
  return h;
}

double root_fidelity(const ProductState& a, const ProductState& b, std::size_t dense_cap) {
  if (a.dim() != b.dim()) throw LinalgError("fidelity: dimension mismatch");
  if (a.aligned_with(b)) {
    double r = 1.0;
    for (std::size_t k = 0; k < a.factors().size(); ++k) {
      r *= root_fidelity(a.factors()[k], b.factors()[k]);
    }
    return r;
  }
  return root_fidelity(a.materialize(dense_cap), b.materialize(dense_cap));
}

ProductState mixture(const ProductState& a, const ProductState& b, std::size_t dense_cap) {
  if (a.dim() != b.dim()) throw LinalgError("mixture: dimension mismatch");
  return ProductState(average(a.materialize(dense_cap), b.materialize(dense_cap)));
}

bool nearly_identical(const ProductState& a, const ProductState& b, double tolerance) {
  if (!a.aligned_with(b)) return false;
  for (std::size_t k = 0; k < a.factors().size(); ++k) {
    if (frobenius_distance(a.factors()[k], b.factors()[k]) >= tolerance) return false;
  }
  return true;
}

}  // namespace cqpolar
