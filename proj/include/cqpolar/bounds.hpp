#pragma once

// Certified intervals on sqrt F for every split channel at any n, using the
// exact plus identity sqrt F(W+) = F(W) and the minus relations
// F(W-) >= F(W), sqrt F(W-) <= 2 sqrt F(W) - F(W).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cqpolar/budget.hpp"
#include "cqpolar/cq_channel.hpp"

namespace cqpolar {

struct ReliabilityInterval {
  double f_lo = 0.0;
  double f_hi = 1.0;
};

// Throws std::invalid_argument unless 0 <= f_lo <= f_hi <= 1.
void validate(const ReliabilityInterval& iv);

ReliabilityInterval propagate_minus(const ReliabilityInterval& iv);
ReliabilityInterval propagate_plus(const ReliabilityInterval& iv);

inline constexpr unsigned kMaxPropagationLevel = 24;

// Intervals at level `from_level + levels` from a full level of intervals.
// Level-synchronous; entry 2j is the minus child of j and 2j+1 the plus child.
std::vector<ReliabilityInterval> propagate_levels(std::vector<ReliabilityInterval> level, unsigned levels);
// All 2^n intervals from the base value f0 = sqrt F(W).
std::vector<ReliabilityInterval> propagate_all(double f0, unsigned n);

enum class Backend { kExact, kBounds, kHybrid };
std::string to_string(Backend b);
Backend parse_backend(const std::string& text);

struct IntervalSet {
  std::vector<ReliabilityInterval> intervals;
  // Exact values, present for the exact backend and for hybrid when n == seed level.
  std::optional<std::vector<ChannelParams>> exact;
  Backend backend = Backend::kBounds;
  unsigned seed_level = 0;
  std::string seed_method;  // "none", "dense", or "gram"
};

// |<psi0|psi1>| when the base channel has one branch with two pure outputs.
std::optional<double> pure_overlap_of(const BinaryCQChannel& w);

// Exact split-channel parameters by whichever exact method fits the budget
// (Gram for pure outputs, otherwise dense synthesis).
Budgeted<std::vector<ChannelParams>> exact_split_params(const BinaryCQChannel& base, unsigned n,
                                                        const Budget& budget = {});

// kExact: exact parameters at n (BudgetExceeded if infeasible).
// kBounds: propagation from the base fidelity.
// kHybrid: exact at the largest feasible level n0 <= min(8, n), then propagation.
Budgeted<IntervalSet> reliability_intervals(const BinaryCQChannel& base, unsigned n, Backend backend,
                                            const Budget& budget = {});

// reliability_intervals for every n in [n_min, n_max], computing each exact
// seed level once.
Budgeted<std::vector<IntervalSet>> reliability_sweep(const BinaryCQChannel& base, unsigned n_min, unsigned n_max,
                                                     Backend backend, const Budget& budget = {});

// Fraction of indices with f_hi <= threshold.
double good_fraction(const std::vector<ReliabilityInterval>& intervals, double threshold);

// "index,f_lo,f_hi,holevo_lo,holevo_hi" with 1-based index and a leading
// "# schema=..." line.
std::string intervals_csv(const std::vector<ReliabilityInterval>& intervals);

}  // namespace cqpolar
