#pragma once

// Quantum successive-cancellation decoding on the full d^N output space.
//
// Step i measures {Pi0, Pi1} built from the averaged states
// rho_bar(u_1..u_i) = 2^-(N-i) sum over ALL future bits of rho_{u G_N}
// (future frozen bits are averaged too). Pi0 = {sqrt rho_bar(..0) -
// sqrt rho_bar(..1) >= 0}, with the kernel assigned to outcome 0; frozen
// positions use the identity and copy the frozen value.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqpolar/budget.hpp"
#include "cqpolar/cq_channel.hpp"
#include "cqpolar/polar_transform.hpp"

namespace cqpolar {

enum class Measurement {
  kSquareRootDifference,
  kHelstrom,  // {rho_bar0 - rho_bar1 >= 0}; for comparison only
};

struct DecoderOptions {
  Measurement measurement = Measurement::kSquareRootDifference;
  Budget budget{};
};

struct DecisionProjectorPair {
  ProjectorMatrix pi0;
  ProjectorMatrix pi1;
};

struct SenCheck {
  double lhs = 0.0;  // 1 - Tr{Pi_N..Pi_1 rho Pi_1..Pi_N}
  double rhs = 0.0;  // 2 sqrt(sum_i Tr{(I - Pi_i) rho})
  bool holds = true;
};

inline constexpr double kSenTolerance = 1e-9;
inline constexpr double kCollapseFloor = 1e-14;

SenCheck sen_bound_check(std::span<const ProjectorMatrix> sequence, const DensityOperator& rho);

struct DecoderStep {
  std::size_t index = 0;  // 0-based
  bool frozen = false;
  int outcome = 0;
  double p0 = 1.0;
  double p1 = 0.0;
};

struct DecoderTrajectory {
  BitVector message;   // u^N sent
  BitVector estimate;  // decoded u^N
  std::vector<DecoderStep> steps;
  bool success = false;
  bool aborted = false;
  // Probability of the realized outcome sequence, the trace left after all
  // unnormalized projections.
  double residual_trace = 1.0;
  SenCheck sen_correct_path;
  SenCheck sen_realized_path;
};

class ScDecoder {
 public:
  // base must have a single branch. BudgetExceeded when d^N exceeds
  // budget.max_dense_dim.
  static Budgeted<ScDecoder> create(const BinaryCQChannel& base, unsigned n, DecoderOptions options = {});

  unsigned n() const { return n_; }
  std::size_t block_length() const { return std::size_t{1} << n_; }
  Eigen::Index dim() const { return dim_; }
  Measurement measurement() const { return options_.measurement; }

  // rho_bar for the bits u_1..u_i (bits.size() == i, 1 <= i <= N).
  Matrix averaged_state(const BitVector& bits) const;
  // Pair for position i (0-based) after the prefix u_1..u_i (prefix.size() == i).
  // Cached by (i, prefix) and shared by copies of the decoder.
  std::shared_ptr<const DecisionProjectorPair> projectors(std::size_t i, const BitVector& prefix) const;

  // L with rho_{u G_N} = L L^dagger.
  Matrix output_factor(const BitVector& u) const;
  Matrix output_state(const BitVector& u) const;

  // Probability that every information decision is correct when u is sent.
  double success_probability(const CodeSpec& spec, const BitVector& u) const;
  // 1 - 2^-K sum over information words, frozen vector as given.
  double exact_block_error(const CodeSpec& spec) const;
  // Average of exact_block_error over all 2^(N-K) frozen vectors.
  double frozen_averaged_block_error(const CodeSpec& spec) const;

  // For position i: 2^-(i-1) sum over prefixes and u_i of
  // (1/2) Tr{(I - Pi_{prefix, u_i}) rho_bar(prefix, u_i)}.
  double step_error(std::size_t i) const;
  // 2^-N sum over all u^N of sum_{i in A} Tr{(I - Pi_{(i), u_1..u_i}) rho_u}.
  double average_projector_failure(const CodeSpec& spec) const;

  DecoderTrajectory run_trial(const CodeSpec& spec, const BitVector& info_bits, std::uint64_t seed) const;

 private:
  ScDecoder() = default;
  Matrix codeword_factor(const BitVector& x) const;
  Matrix codeword_state(const BitVector& x) const;
  const ProjectorMatrix& correct_projector(std::size_t i, const BitVector& u) const;

  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, std::uint64_t>, std::shared_ptr<const DecisionProjectorPair>> pairs;
  };

  unsigned n_ = 0;
  Eigen::Index dim_ = 1;
  Eigen::Index local_dim_ = 1;
  DecoderOptions options_;
  std::array<Matrix, 2> rho_;     // single-use output states
  std::array<Matrix, 2> factor_;  // rho_b = factor_b factor_b^dagger
  std::shared_ptr<Cache> cache_;
  std::shared_ptr<const ProjectorMatrix> identity_;
};

struct ErrorReport {
  std::optional<double> exact_block_error;
  std::optional<double> frozen_averaged_block_error;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  std::size_t aborted = 0;
  double prop2_bound = 0.0;
  std::size_t sen_checks_passed = 0;
  std::size_t sen_checks_total = 0;
  double sen_max_margin = 0.0;  // max(lhs - rhs) over all checks
  std::size_t commuting_bound_failures = 0;  // trajectories where lhs > sum_i Tr{(I - Pi_i) rho}
};

struct MonteCarloResult {
  ErrorReport report;
  std::vector<DecoderTrajectory> trajectories;  // only when requested
};

// Samples u_A uniformly per trial; trial t uses the stream derive_seed(seed, t).
MonteCarloResult decode_monte_carlo(const ScDecoder& decoder, const CodeSpec& spec, std::size_t trials,
                                    std::uint64_t seed, bool keep_trajectories = false);

std::string to_json(const ErrorReport& report, const std::string& channel_label, const CodeSpec& spec);
// One row per step: trial,index,frozen,outcome,p0,p1 (1-based index).
std::string trajectories_csv(const std::vector<DecoderTrajectory>& trajectories);

}  // namespace cqpolar
