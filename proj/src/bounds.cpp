#include "cqpolar/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cqpolar/gram_backend.hpp"
#include "cqpolar/polar_transform.hpp"
#include "cqpolar/synthesis.hpp"

namespace cqpolar {

void validate(const ReliabilityInterval& iv) {
  if (!(iv.f_lo >= 0.0 && iv.f_lo <= iv.f_hi && iv.f_hi <= 1.0)) {
    throw std::invalid_argument("reliability interval must satisfy 0 <= f_lo <= f_hi <= 1");
  }
}

ReliabilityInterval propagate_minus(const ReliabilityInterval& iv) {
  return {iv.f_lo, std::min(1.0, 2.0 * iv.f_hi - iv.f_hi * iv.f_hi)};
}

ReliabilityInterval propagate_plus(const ReliabilityInterval& iv) {
  return {iv.f_lo * iv.f_lo, iv.f_hi * iv.f_hi};
}

std::vector<ReliabilityInterval> propagate_levels(std::vector<ReliabilityInterval> level, unsigned levels) {
  if (level.empty()) throw std::invalid_argument("propagate_levels: empty level");
  const unsigned start = log2_exact(level.size());
  if (start + levels > kMaxPropagationLevel) {
    throw std::invalid_argument("propagate_levels: level above the cap of 24");
  }
  for (const auto& iv : level) validate(iv);
  std::vector<ReliabilityInterval> next;
  for (unsigned step = 0; step < levels; ++step) {
    next.resize(2 * level.size());
    for (std::size_t j = 0; j < level.size(); ++j) {
      next[2 * j] = propagate_minus(level[j]);
      next[2 * j + 1] = propagate_plus(level[j]);
    }
    level.swap(next);
  }
  return level;
}

std::vector<ReliabilityInterval> propagate_all(double f0, unsigned n) {
  return propagate_levels({ReliabilityInterval{f0, f0}}, n);
}

std::string to_string(Backend b) {
  switch (b) {
    case Backend::kExact: return "exact";
    case Backend::kBounds: return "bounds";
    case Backend::kHybrid: return "hybrid";
  }
  return "unknown";
}

Backend parse_backend(const std::string& text) {
  if (text == "exact") return Backend::kExact;
  if (text == "bounds") return Backend::kBounds;
  if (text == "hybrid") return Backend::kHybrid;
  throw std::invalid_argument("unknown backend '" + text + "' (expected exact, bounds or hybrid)");
}

std::optional<double> pure_overlap_of(const BinaryCQChannel& w) {
  if (w.branch_count() != 1) return std::nullopt;
  const auto& b = w.branches().front();
  if (b.sigma0.factors().size() != 1 || b.sigma1.factors().size() != 1) return std::nullopt;
  const auto& r0 = b.sigma0.factors().front();
  const auto& r1 = b.sigma1.factors().front();
  auto is_pure = [](const DensityOperator& r) { return std::abs(r.eigenvalues().maxCoeff() - 1.0) < 1e-12; };
  if (!is_pure(r0) || !is_pure(r1)) return std::nullopt;
  return std::min(1.0, root_fidelity(r0, r1));
}

namespace {

// Dimension check that avoids starting a synthesis that cannot fit.
bool dense_synthesis_may_fit(const BinaryCQChannel& base, unsigned n, const Budget& budget) {
  // Classical alphabets are reduced as they grow; the synthesis checks its own caps.
  if (base.is_diagonal()) return true;
  double dim = 1.0;
  const double d = static_cast<double>(base.quantum_dim());
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
    dim *= d;
    if (dim > 1e18) return false;
  }
  if (dim > static_cast<double>(budget.max_quantum_dim)) return false;
  return dim <= static_cast<double>(budget.max_dense_dim);
}

}  // namespace

Budgeted<std::vector<ChannelParams>> exact_split_params(const BinaryCQChannel& base, unsigned n,
                                                        const Budget& budget) {
  if (n > 30) return BudgetExceeded{"level above 30"};
  if (auto overlap = pure_overlap_of(base); overlap && !base.is_diagonal()) {
    const std::size_t len = std::size_t{1} << n;
    std::vector<std::size_t> all(len);
    for (std::size_t i = 0; i < len; ++i) all[i] = i + 1;
    auto gram = gram_split_params(*overlap, n, all, budget);
    if (within_budget(gram)) return gram;
  }
  if (!dense_synthesis_may_fit(base, n, budget)) {
    std::ostringstream os;
    os << "exact synthesis at n=" << n << " exceeds the dimension caps";
    return BudgetExceeded{os.str()};
  }
  return split_params(base, n, budget);
}

namespace {

using ExactSource = std::function<Budgeted<std::vector<ChannelParams>>(unsigned)>;

Budgeted<IntervalSet> intervals_from(const BinaryCQChannel& base, unsigned n, Backend backend,
                                     const Budget& budget, const ExactSource& exact_at) {
  if (n > kMaxPropagationLevel) return BudgetExceeded{"n above the propagation cap of 24"};
  IntervalSet out;
  out.backend = backend;
  if (backend == Backend::kBounds) {
    out.intervals = propagate_all(channel_root_fidelity(base, budget), n);
    out.seed_method = "none";
    return out;
  }
  const unsigned top = backend == Backend::kExact ? n : std::min(8u, n);
  for (int level = static_cast<int>(top); level >= 0; --level) {
    auto exact = exact_at(static_cast<unsigned>(level));
    if (!within_budget(exact)) {
      if (backend == Backend::kExact) return std::get<BudgetExceeded>(exact);
      continue;
    }
    auto params = std::get<std::vector<ChannelParams>>(std::move(exact));
    std::vector<ReliabilityInterval> seed(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) seed[i] = {params[i].root_fidelity, params[i].root_fidelity};
    out.seed_level = static_cast<unsigned>(level);
    out.seed_method = pure_overlap_of(base) && !base.is_diagonal() && level > 0 ? "gram" : "dense";
    if (static_cast<unsigned>(level) == n) out.exact = std::move(params);
    out.intervals = propagate_levels(std::move(seed), n - static_cast<unsigned>(level));
    return out;
  }
  return BudgetExceeded{"no exact level fits the budget"};
}

}  // namespace

Budgeted<IntervalSet> reliability_intervals(const BinaryCQChannel& base, unsigned n, Backend backend,
                                            const Budget& budget) {
  return intervals_from(base, n, backend, budget,
                        [&](unsigned level) { return exact_split_params(base, level, budget); });
}

Budgeted<std::vector<IntervalSet>> reliability_sweep(const BinaryCQChannel& base, unsigned n_min, unsigned n_max,
                                                     Backend backend, const Budget& budget) {
  if (n_min > n_max) throw std::invalid_argument("reliability_sweep: n_min > n_max");
  std::map<unsigned, Budgeted<std::vector<ChannelParams>>> memo;
  const ExactSource exact_at = [&](unsigned level) {
    auto it = memo.find(level);
    if (it == memo.end()) it = memo.emplace(level, exact_split_params(base, level, budget)).first;
    return it->second;
  };
  std::vector<IntervalSet> out;
  for (unsigned n = n_min; n <= n_max; ++n) {
    auto set = intervals_from(base, n, backend, budget, exact_at);
    if (auto* e = std::get_if<BudgetExceeded>(&set)) return *e;
    out.push_back(std::get<IntervalSet>(std::move(set)));
  }
  return out;
}

double good_fraction(const std::vector<ReliabilityInterval>& intervals, double threshold) {
  if (intervals.empty()) return 0.0;
  const auto good = std::count_if(intervals.begin(), intervals.end(),
                                  [threshold](const auto& iv) { return iv.f_hi <= threshold; });
  return static_cast<double>(good) / static_cast<double>(intervals.size());
}

std::string intervals_csv(const std::vector<ReliabilityInterval>& intervals) {
  std::string out = "# schema=cqpolar.intervals/1\nindex,f_lo,f_hi,holevo_lo,holevo_hi\n";
  char line[160];
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    const double holevo_lo = holevo_lower_bound_from_fidelity(iv.f_hi * iv.f_hi);
    const double holevo_hi = holevo_upper_bound_from_fidelity(iv.f_lo * iv.f_lo);
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g\n", i + 1, iv.f_lo, iv.f_hi, holevo_lo, holevo_hi);
    out += line;
  }
  return out;
}

}  // namespace cqpolar
