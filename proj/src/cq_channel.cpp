#include "cqpolar/cq_channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqpolar {

BinaryCQChannel::BinaryCQChannel(const DensityOperator& rho0, const DensityOperator& rho1) {
  if (rho0.dim() != rho1.dim()) throw LinalgError("BinaryCQChannel: output dimensions differ");
  branches_.push_back(ChannelBranch{1.0, ProductState(rho0), ProductState(rho1),
                                    ProductState(average(rho0, rho1))});
  dim_ = static_cast<std::size_t>(rho0.dim());
}

BinaryCQChannel BinaryCQChannel::from_branches(std::vector<ChannelBranch> branches) {
  if (branches.empty()) throw LinalgError("BinaryCQChannel: no branches");
  const std::size_t dim = branches.front().sigma0.dim();
  double total = 0.0;
  for (const auto& b : branches) {
    if (!(b.weight >= 0.0)) throw LinalgError("BinaryCQChannel: negative branch weight");
    if (b.sigma0.dim() != dim || b.sigma1.dim() != dim || b.mean.dim() != dim) {
      throw LinalgError("BinaryCQChannel: branch dimensions differ");
    }
    total += b.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    std::ostringstream os;
    os << "BinaryCQChannel: branch weights sum to " << total;
    throw LinalgError(os.str());
  }
  BinaryCQChannel w;
  w.branches_ = std::move(branches);
  w.dim_ = dim;
  return w;
}

bool BinaryCQChannel::is_diagonal() const {
  return std::all_of(branches_.begin(), branches_.end(),
                     [](const auto& b) { return b.sigma0.is_diagonal() && b.sigma1.is_diagonal(); });
}

double channel_root_fidelity(const BinaryCQChannel& w, const Budget& budget) {
  double s = 0.0;
  for (const auto& b : w.branches()) {
    const double r = std::isnan(b.known_root_fidelity) ? root_fidelity(b.sigma0, b.sigma1, budget.max_dense_dim)
                                                       : b.known_root_fidelity;
    s += b.weight * r;
  }
  return std::min(s, 1.0);
}

double channel_fidelity(const BinaryCQChannel& w, const Budget& budget) {
  const double r = channel_root_fidelity(w, budget);
  return r * r;
}

double holevo_information(const BinaryCQChannel& w) {
  double s = 0.0;
  for (const auto& b : w.branches()) {
    s += b.weight * (von_neumann_entropy(b.mean) - 0.5 * von_neumann_entropy(b.sigma0) -
                     0.5 * von_neumann_entropy(b.sigma1));
  }
  return std::clamp(s, 0.0, 1.0);
}

ChannelParams channel_params(const BinaryCQChannel& w, const Budget& budget) {
  ChannelParams p;
  p.holevo = holevo_information(w);
  p.root_fidelity = channel_root_fidelity(w, budget);
  p.fidelity = p.root_fidelity * p.root_fidelity;
  return p;
}

namespace {

void require_unit_interval(double f, const char* what) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": argument outside [0,1]");
  }
}

}  // namespace

double holevo_lower_bound_from_fidelity(double f) {
  require_unit_interval(f, "holevo_lower_bound_from_fidelity");
  return std::log2(2.0 / (1.0 + std::sqrt(f)));
}

double holevo_upper_bound_from_fidelity(double f) {
  require_unit_interval(f, "holevo_upper_bound_from_fidelity");
  return std::sqrt(1.0 - f);
}

double holevo_entropy_bound_from_fidelity(double f) {
  require_unit_interval(f, "holevo_entropy_bound_from_fidelity");
  return binary_entropy((1.0 - std::sqrt(f)) / 2.0);
}

BinaryCQChannel make_classical(const std::vector<double>& row0, const std::vector<double>& row1) {
  if (row0.size() != row1.size() || row0.empty()) {
    throw std::invalid_argument("make_classical: rows must be non-empty and of equal length");
  }
  auto to_vector = [](const std::vector<double>& row) {
    for (double p : row) {
      if (!(p >= 0.0)) throw std::invalid_argument("make_classical: negative probability");
    }
    return RealVector(Eigen::Map<const RealVector>(row.data(), static_cast<Eigen::Index>(row.size())));
  };
  try {
    return BinaryCQChannel(DensityOperator::diagonal(to_vector(row0)),
                           DensityOperator::diagonal(to_vector(row1)));
  } catch (const LinalgError& e) {
    throw std::invalid_argument(std::string("make_classical: ") + e.what());
  }
}

BinaryCQChannel make_bsc(double crossover) {
  require_unit_interval(crossover, "make_bsc");
  return make_classical({1.0 - crossover, crossover}, {crossover, 1.0 - crossover});
}

BinaryCQChannel make_bec(double erasure) {
  require_unit_interval(erasure, "make_bec");
  return make_classical({1.0 - erasure, erasure, 0.0}, {0.0, erasure, 1.0 - erasure});
}

BinaryCQChannel make_pure_overlap(double overlap) {
  if (!(overlap >= -1.0 && overlap <= 1.0)) {
    throw std::invalid_argument("make_pure_overlap: overlap outside [-1,1]");
  }
  const double t = std::acos(overlap) / 2.0;
  ComplexVector psi0(2), psi1(2);
  psi0 << std::cos(t), std::sin(t);
  psi1 << std::cos(t), -std::sin(t);
  return BinaryCQChannel(DensityOperator::pure(psi0), DensityOperator::pure(psi1));
}

BinaryCQChannel make_bpsk(double amplitude) {
  if (!std::isfinite(amplitude)) throw std::invalid_argument("make_bpsk: amplitude not finite");
  return make_pure_overlap(std::exp(-2.0 * amplitude * amplitude));
}

namespace {

Eigen::Vector3d bloch_vector(const Matrix& rho) {
  return Eigen::Vector3d(2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real());
}

Matrix rotate_and_realify(const Matrix& u, const Matrix& rho) {
  Matrix out = u * rho * u.adjoint();
  for (Eigen::Index k = 0; k < out.size(); ++k) out.data()[k] = Complex(out.data()[k].real(), 0.0);
  return out;
}

}  // namespace

BinaryCQChannel real_frame(const BinaryCQChannel& w) {
  if (std::all_of(w.branches().begin(), w.branches().end(),
                  [](const auto& b) { return b.sigma0.is_real() && b.sigma1.is_real(); })) {
    return w;
  }
  if (w.branch_count() != 1 || w.quantum_dim() != 2) return w;
  const auto& b = w.branches().front();
  const Matrix rho0 = b.sigma0.materialize(2).dense();
  const Matrix rho1 = b.sigma1.materialize(2).dense();
  const Eigen::Vector3d r0 = bloch_vector(rho0);
  const Eigen::Vector3d r1 = bloch_vector(rho1);
  Eigen::Vector3d normal = r0.cross(r1);
  if (normal.norm() < 1e-12) {
    const Eigen::Vector3d r = r0.norm() > r1.norm() ? r0 : r1;
    normal = r.norm() < 1e-12 ? Eigen::Vector3d::UnitY() : r.unitOrthogonal();
  }
  normal.normalize();
  // Rotate the normal onto the y axis; the Bloch vectors then have no y component.
  const Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  Eigen::Vector3d axis = normal.cross(y);
  const double angle = std::atan2(axis.norm(), normal.dot(y));
  if (axis.norm() < 1e-15) axis = Eigen::Vector3d::UnitX();
  axis.normalize();
  const Complex i(0.0, 1.0);
  Matrix k_sigma(2, 2);
  k_sigma << Complex(axis.z(), 0.0), Complex(axis.x(), -axis.y()), Complex(axis.x(), axis.y()), Complex(-axis.z(), 0.0);
  const Matrix u = std::cos(angle / 2.0) * Matrix::Identity(2, 2) - i * std::sin(angle / 2.0) * k_sigma;
  return BinaryCQChannel(DensityOperator::from_matrix(rotate_and_realify(u, rho0)),
                         DensityOperator::from_matrix(rotate_and_realify(u, rho1)));
}

DensityOperator random_qubit_state(Rng& rng, double max_radius) {
  double x = 0.0, y = 0.0, z = 0.0, norm = 0.0;
  while (norm < 1e-6) {
    x = rng.normal();
    y = rng.normal();
    z = rng.normal();
    norm = std::sqrt(x * x + y * y + z * z);
  }
  const double r = max_radius * rng.uniform() / norm;
  Matrix m(2, 2);
  m << Complex(1.0 + r * z, 0.0), Complex(r * x, -r * y), Complex(r * x, r * y), Complex(1.0 - r * z, 0.0);
  return DensityOperator::from_matrix(0.5 * m);
}

BinaryCQChannel random_qubit_channel(Rng& rng) {
  DensityOperator rho0 = random_qubit_state(rng);
  DensityOperator rho1 = random_qubit_state(rng);
  return BinaryCQChannel(rho0, rho1);
}

DensityOperator random_density_operator(Rng& rng, Eigen::Index dim) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::from_matrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace cqpolar
