#pragma once

// Dense complex Hermitian linear algebra for density operators: spectra,
// square roots, trace norm, fidelity, von Neumann entropy, tensor products
// and eigenspace projectors.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cqpolar {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNegativeEigenvalueTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kProjectorZeroTolerance = 1e-10;
inline constexpr double kEntropyCutoff = 1e-12;
inline constexpr double kSqrtZeroCutoff = 1e-13;
inline constexpr double kIdempotenceTolerance = 1e-9;

class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ascending eigenvalues with orthonormal eigenvectors in the columns.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

bool is_hermitian(const Matrix& m, double tolerance = kHermitianTolerance);

class HermitianMatrix {
 public:
  // Throws LinalgError when m is not square or not Hermitian within tolerance.
  // The stored matrix is the exact Hermitian part (m + m^dagger) / 2.
  explicit HermitianMatrix(const Matrix& m, double tolerance = kHermitianTolerance);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  HermitianMatrix operator-() const;
  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);

 private:
  struct Trusted {};
  HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

Spectrum eig_hermitian(const HermitianMatrix& m);
RealVector eigenvalues_hermitian(const HermitianMatrix& m);

// Sum of singular values. Throws on non-square input.
double trace_norm(const Matrix& m);
RealVector singular_values(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

// Unit-trace positive semidefinite operator. Storage is either a dense matrix
// or a diagonal (commuting, classical) vector; the spectrum is computed once at
// construction and shared by all copies.
class DensityOperator {
 public:
  // Validates Hermiticity (1e-12), eigenvalues >= -1e-10, and unit trace (1e-10).
  static DensityOperator from_matrix(const Matrix& m);
  static DensityOperator diagonal(const RealVector& probabilities);
  static DensityOperator pure(const ComplexVector& psi);
  static DensityOperator maximally_mixed(Eigen::Index dim);

  // Skips validation; used for states assembled from already-valid states.
  static DensityOperator from_trusted(Matrix m);
  static DensityOperator from_trusted_diagonal(RealVector p);

  Eigen::Index dim() const;
  bool is_diagonal() const;
  bool is_real() const;

  Matrix dense() const;
  const RealVector& diagonal_entries() const;
  const RealVector& eigenvalues() const;
  // Dense storage only.
  const Spectrum& spectrum() const;

  // Positive square root; eigenvalues up to 1e-13 count as zero.
  Matrix sqrt() const;

  // True when both operators share storage.
  bool same_storage(const DensityOperator& other) const { return rep_ == other.rep_; }

  struct Rep;
  friend DensityOperator permute_basis(const DensityOperator& rho, std::span<const Eigen::Index> perm);

 private:
  explicit DensityOperator(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

DensityOperator kron(const DensityOperator& a, const DensityOperator& b);
// (a0 (x) b0 + a1 (x) b1) / 2 without diagonalizing the products.
DensityOperator average_of_products(const DensityOperator& a0, const DensityOperator& b0,
                                    const DensityOperator& a1, const DensityOperator& b1);
// (a + b) / 2
DensityOperator average(const DensityOperator& a, const DensityOperator& b);
double frobenius_distance(const DensityOperator& a, const DensityOperator& b);
// Basis relabelling: result(i, j) = rho(perm[i], perm[j]). Reuses the spectrum.
DensityOperator permute_basis(const DensityOperator& rho, std::span<const Eigen::Index> perm);
// rho on A (x) B with dim_a * dim_b = dim, returned as the same state on B (x) A.
DensityOperator swap_tensor_factors(const DensityOperator& rho, Eigen::Index dim_a, Eigen::Index dim_b);

Matrix matrix_sqrt(const HermitianMatrix& m);

// F(a, b) = || sqrt(a) sqrt(b) ||_1^2.
double fidelity(const DensityOperator& a, const DensityOperator& b);
// || sqrt(a) sqrt(b) ||_1.
double root_fidelity(const DensityOperator& a, const DensityOperator& b);

// Base-2 von Neumann entropy; eigenvalues <= 1e-12 contribute nothing.
double von_neumann_entropy(const DensityOperator& rho);
double shannon_entropy(std::span<const double> probabilities);
double binary_entropy(double x);

class ProjectorMatrix {
 public:
  // Validates Hermiticity and P*P = P within 1e-9 (Frobenius).
  explicit ProjectorMatrix(const Matrix& m);
  static ProjectorMatrix identity(Eigen::Index dim);
  // Projector onto the span of the given orthonormal columns.
  static ProjectorMatrix from_orthonormal_columns(const Matrix& columns, Eigen::Index dim);

  Eigen::Index dim() const { return p_.rows(); }
  const Matrix& matrix() const { return p_; }
  ProjectorMatrix complement() const;

 private:
  struct Trusted {};
  ProjectorMatrix(Matrix m, Trusted) : p_(std::move(m)) {}
  Matrix p_;
};

enum class EigenspaceSign {
  kNonNegative,       // eigenvalues >= -tolerance; the kernel belongs here
  kStrictlyPositive,  // eigenvalues > tolerance
  kStrictlyNegative,  // eigenvalues < -tolerance
};

ProjectorMatrix eigenspace_projector(const HermitianMatrix& m, EigenspaceSign sign,
                                     double zero_tolerance = kProjectorZeroTolerance);

// {m >= 0}: projector onto the eigenvectors with eigenvalue >= -zero_tolerance.
ProjectorMatrix positive_eigenspace_projector(const HermitianMatrix& m,
                                              double zero_tolerance = kProjectorZeroTolerance);

// Lazy tensor product of density operators. Entropy is additive and fidelity
// multiplicative over aligned factors, so products never need materializing
// for those quantities.
class ProductState {
 public:
  explicit ProductState(DensityOperator single);
  static ProductState tensor(const ProductState& a, const ProductState& b);

  std::span<const DensityOperator> factors() const { return factors_; }
  std::size_t dim() const { return dim_; }
  bool is_diagonal() const;
  bool is_real() const;
  bool aligned_with(const ProductState& other) const;

  // Single operator on the full space; throws LinalgError if a dense result
  // would exceed dense_cap.
  DensityOperator materialize(std::size_t dense_cap) const;

 private:
  ProductState() = default;
  std::vector<DensityOperator> factors_;
  std::size_t dim_ = 1;
};

double von_neumann_entropy(const ProductState& rho);
double root_fidelity(const ProductState& a, const ProductState& b, std::size_t dense_cap);
// (a + b) / 2 as a single materialized factor.
ProductState mixture(const ProductState& a, const ProductState& b, std::size_t dense_cap);
// Factor-wise identity within tolerance; conservative (false when structures differ).
bool nearly_identical(const ProductState& a, const ProductState& b, double tolerance);

}  // namespace cqpolar
