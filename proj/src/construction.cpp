#include "cqpolar/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "cqpolar/random.hpp"

namespace cqpolar {

std::vector<std::size_t> select_information_set(const std::vector<double>& reliabilities, std::size_t k) {
  if (k > reliabilities.size()) throw std::invalid_argument("select_information_set: K exceeds N");
  std::vector<std::size_t> order(reliabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return reliabilities[a] < reliabilities[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

double error_bound(const std::vector<double>& reliabilities, const std::vector<std::size_t>& info_set) {
  double sum = 0.0;
  for (std::size_t i : info_set) {
    if (i >= reliabilities.size()) throw std::invalid_argument("error_bound: index out of range");
    sum += 0.5 * reliabilities[i];
  }
  return 2.0 * std::sqrt(sum);
}

FrozenPolicy parse_frozen_policy(const std::string& text) {
  if (text == "zeros") return FrozenPolicy::kZeros;
  if (text == "random") return FrozenPolicy::kRandom;
  throw std::invalid_argument("unknown frozen policy '" + text + "' (expected zeros or random)");
}

CodeSpec choose_frozen_bits(const CodeSpec& spec, FrozenPolicy policy, std::uint64_t seed) {
  BitVector frozen(spec.block_length(), 0);
  if (policy == FrozenPolicy::kRandom) {
    Rng rng(seed);
    for (std::size_t i = 0; i < frozen.size(); ++i) {
      const int bit = rng.bit();
      if (!spec.is_info(i)) frozen[i] = static_cast<std::uint8_t>(bit);
    }
  }
  return spec.with_frozen_values(std::move(frozen));
}

std::size_t info_count_for_rate(double rate, unsigned n) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must lie in [0,1]");
  if (n > 30) throw std::invalid_argument("n above 30");
  const auto len = static_cast<long double>(std::size_t{1} << n);
  return static_cast<std::size_t>(std::floor(static_cast<long double>(rate) * len));
}

std::vector<double> rule_values(const IntervalSet& set) {
  std::vector<double> out(set.intervals.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = set.exact ? (*set.exact)[i].root_fidelity : set.intervals[i].f_hi;
  }
  return out;
}

Budgeted<ConstructionReport> construct_code(const BinaryCQChannel& base, unsigned n, std::size_t k,
                                            Backend backend, const Budget& budget, FrozenPolicy policy,
                                            std::uint64_t seed) {
  if (n > 30 || k > (std::size_t{1} << n)) throw std::invalid_argument("construct_code: K exceeds N");
  auto set = reliability_intervals(base, n, backend, budget);
  if (auto* e = std::get_if<BudgetExceeded>(&set)) return *e;
  auto& intervals = std::get<IntervalSet>(set);
  const auto values = rule_values(intervals);
  auto info = select_information_set(values, k);
  const double bound = error_bound(values, info);
  CodeSpec spec = choose_frozen_bits(CodeSpec(n, std::move(info)), policy, seed);
  return ConstructionReport{std::move(spec), std::move(intervals), bound, ""};
}

std::string to_json(const ConstructionReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "cqpolar.construction/1";
  j["channel"] = report.channel_label;
  j["backend"] = to_string(report.reliabilities.backend);
  j["seed_level"] = report.reliabilities.seed_level;
  j["seed_method"] = report.reliabilities.seed_method;
  j["code"] = nlohmann::ordered_json::parse(report.spec.to_json());
  j["error_bound"] = report.error_bound;
  auto rel = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.reliabilities.intervals.size(); ++i) {
    const auto& iv = report.reliabilities.intervals[i];
    nlohmann::ordered_json e;
    e["index"] = i + 1;
    if (report.reliabilities.exact) {
      e["root_fidelity"] = (*report.reliabilities.exact)[i].root_fidelity;
      e["holevo"] = (*report.reliabilities.exact)[i].holevo;
    } else {
      e["f_lo"] = iv.f_lo;
      e["f_hi"] = iv.f_hi;
    }
    rel.push_back(e);
  }
  j["reliabilities"] = rel;
  return j.dump(2);
}

}  // namespace cqpolar
