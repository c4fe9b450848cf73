#pragma once

// Binary-input classical-quantum channels as weighted branches. Input u on
// branch c produces sigma_u(c); the full output is the block-diagonal state
// sum_c weight(c) |c><c| (x) sigma_u(c), so the classical register never
// appears as a matrix dimension.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cqpolar/budget.hpp"
#include "cqpolar/linalg.hpp"
#include "cqpolar/random.hpp"

namespace cqpolar {

inline constexpr double kWeightTolerance = 1e-10;

struct ChannelBranch {
  double weight = 0.0;
  ProductState sigma0;
  ProductState sigma1;
  // (sigma0 + sigma1) / 2, kept because the transforms can produce it in
  // factored form without diagonalizing anything.
  ProductState mean;
  // sqrt F(sigma0, sigma1) when already known, otherwise NaN.
  double known_root_fidelity = std::numeric_limits<double>::quiet_NaN();
};

class BinaryCQChannel {
 public:
  // Single-branch channel u -> rho_u. Throws LinalgError on dimension mismatch.
  BinaryCQChannel(const DensityOperator& rho0, const DensityOperator& rho1);

  // Validates weights (non-negative, sum 1 within 1e-10), dimensions, and
  // that each mean has the branch dimension.
  static BinaryCQChannel from_branches(std::vector<ChannelBranch> branches);

  std::size_t quantum_dim() const { return dim_; }
  std::size_t branch_count() const { return branches_.size(); }
  std::span<const ChannelBranch> branches() const { return branches_; }
  bool is_diagonal() const;

 private:
  BinaryCQChannel() = default;
  std::vector<ChannelBranch> branches_;
  std::size_t dim_ = 0;
};

struct ChannelParams {
  double holevo = 0.0;
  double fidelity = 0.0;
  double root_fidelity = 0.0;
};

// sum_c weight(c) sqrt(F(sigma0(c), sigma1(c))). Factor-aligned branches use
// multiplicativity; others are materialized under budget.max_dense_dim.
double channel_root_fidelity(const BinaryCQChannel& w, const Budget& budget = {});
double channel_fidelity(const BinaryCQChannel& w, const Budget& budget = {});
// Symmetric Holevo information in bits via the per-branch decomposition.
double holevo_information(const BinaryCQChannel& w);
ChannelParams channel_params(const BinaryCQChannel& w, const Budget& budget = {});

// log2(2 / (1 + sqrt(f)))
double holevo_lower_bound_from_fidelity(double f);
// sqrt(1 - f)
double holevo_upper_bound_from_fidelity(double f);
// H2((1 - sqrt(f)) / 2), never larger than the square-root bound.
double holevo_entropy_bound_from_fidelity(double f);

// Rows are the output distributions for inputs 0 and 1, embedded as diagonal states.
BinaryCQChannel make_classical(const std::vector<double>& row0, const std::vector<double>& row1);
BinaryCQChannel make_bsc(double crossover);
// Outputs ordered {0, erasure, 1}.
BinaryCQChannel make_bec(double erasure);
// psi0 = (cos t, sin t), psi1 = (cos t, -sin t) with <psi0|psi1> = overlap.
BinaryCQChannel make_pure_overlap(double overlap);
// Coherent states +-alpha reduced to their span: overlap exp(-2 alpha^2).
BinaryCQChannel make_bpsk(double amplitude);

// The same channel in a basis where every state is a real matrix, when such a
// basis is known: already-real channels, and single-branch qubit channels
// (rotate the plane of the two Bloch vectors onto the xz plane). Otherwise
// returns w unchanged. I and F are unitarily invariant.
BinaryCQChannel real_frame(const BinaryCQChannel& w);

// Haar-distributed pure qubit state mixed toward I/2 by a uniform radius in [0, max_radius].
DensityOperator random_qubit_state(Rng& rng, double max_radius = 0.98);
// Both outputs independent random qubit states with complex off-diagonals.
BinaryCQChannel random_qubit_channel(Rng& rng);
// Ginibre-distributed full-rank state of the given dimension.
DensityOperator random_density_operator(Rng& rng, Eigen::Index dim);

}  // namespace cqpolar
