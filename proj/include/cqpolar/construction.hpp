#pragma once

// The polar coding rule: information positions are the K split channels with
// the smallest sqrt F (upper bounds under the bounds backend), and the block
// error bound 2 sqrt(sum_{i in A} sqrt F(W_N^(i)) / 2).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cqpolar/bounds.hpp"
#include "cqpolar/polar_transform.hpp"

namespace cqpolar {

// Indices (0-based, ascending) of the K smallest values; ties go to the
// smaller index. Throws if K exceeds the number of values.
std::vector<std::size_t> select_information_set(const std::vector<double>& reliabilities, std::size_t k);

double error_bound(const std::vector<double>& reliabilities, const std::vector<std::size_t>& info_set);

enum class FrozenPolicy { kZeros, kRandom };
FrozenPolicy parse_frozen_policy(const std::string& text);

// Same information set with frozen values set by the policy; kRandom draws
// independent bits from the seed, so the result is reproducible.
CodeSpec choose_frozen_bits(const CodeSpec& spec, FrozenPolicy policy, std::uint64_t seed = 0);

// K = floor(N R).
std::size_t info_count_for_rate(double rate, unsigned n);

struct ConstructionReport {
  CodeSpec spec;
  IntervalSet reliabilities;
  double error_bound = 0.0;
  std::string channel_label;
};

// Per-index sqrt F used by the rule: the exact value when available, else f_hi.
std::vector<double> rule_values(const IntervalSet& set);

Budgeted<ConstructionReport> construct_code(const BinaryCQChannel& base, unsigned n, std::size_t k,
                                            Backend backend, const Budget& budget = {},
                                            FrozenPolicy policy = FrozenPolicy::kZeros, std::uint64_t seed = 0);

std::string to_json(const ConstructionReport& report);

}  // namespace cqpolar
