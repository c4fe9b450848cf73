#include "cqpolar/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqpolar/channel_spec.hpp"
#include "cqpolar/construction.hpp"
#include "cqpolar/sc_decoder.hpp"
#include "cqpolar/verify.hpp"

namespace cqpolar {
namespace {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
T require(Budgeted<T> r) {
  if (auto* e = std::get_if<BudgetExceeded>(&r)) throw BudgetError(e->what);
  return std::get<T>(std::move(r));
}

void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

struct CodeArgs {
  std::string channel;
  unsigned n = 0;
  std::optional<double> rate;
  std::optional<std::size_t> k;
  std::string backend = "hybrid";
};

void add_code_args(CLI::App* cmd, CodeArgs& a) {
  cmd->add_option("--channel", a.channel, "preset:param (bsc, bec, pure_overlap, bpsk) or JSON path")->required();
  cmd->add_option("--n", a.n, "log2 of the block length")->required();
  auto* rate = cmd->add_option("--rate", a.rate, "code rate R; K = floor(N R)");
  auto* k = cmd->add_option("--K", a.k, "number of information bits");
  rate->excludes(k);
  k->excludes(rate);
  cmd->add_option("--backend", a.backend, "exact | bounds | hybrid")->capture_default_str();
}

std::size_t info_count(const CodeArgs& a) {
  if (a.k) {
    if (*a.k > (std::size_t{1} << a.n)) throw std::invalid_argument("--K exceeds the block length");
    return *a.k;
  }
  if (a.rate) return info_count_for_rate(*a.rate, a.n);
  throw std::invalid_argument("one of --rate or --K is required");
}

std::vector<std::size_t> parse_info_list(const std::string& text, std::size_t len) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size() || v < 1 || v > len) throw std::invalid_argument("--info entries must be in 1..N");
    out.push_back(v - 1);
  }
  return out;
}

std::string summary_json(const std::string& label, unsigned n, const IntervalSet& set) {
  nlohmann::ordered_json j;
  j["schema"] = "cqpolar.polarize_summary/1";
  j["channel"] = label;
  j["n"] = n;
  j["N"] = std::size_t{1} << n;
  j["backend"] = to_string(set.backend);
  j["seed_level"] = set.seed_level;
  j["seed_method"] = set.seed_method;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& s : polarization_summary(set, {0.1, 0.01})) {
    rows.push_back({{"delta", s.delta}, {"good_fraction", s.good_fraction}, {"bad_fraction", s.bad_fraction}});
  }
  j["summary"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace

std::string polarize_csv(const IntervalSet& set) {
  std::string out = "# schema=cqpolar.polarize/1\nindex,f_lo,f_hi,holevo_lo,holevo_hi\n";
  char line[160];
  for (std::size_t i = 0; i < set.intervals.size(); ++i) {
    double f_lo = set.intervals[i].f_lo;
    double f_hi = set.intervals[i].f_hi;
    double h_lo = holevo_lower_bound_from_fidelity(f_hi * f_hi);
    double h_hi = holevo_upper_bound_from_fidelity(f_lo * f_lo);
    if (set.exact) {
      f_lo = f_hi = (*set.exact)[i].root_fidelity;
      h_lo = h_hi = (*set.exact)[i].holevo;
    }
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g\n", i + 1, f_lo, f_hi, h_lo, h_hi);
    out += line;
  }
  return out;
}

std::vector<PolarizationSummary> polarization_summary(const IntervalSet& set, const std::vector<double>& deltas) {
  std::vector<PolarizationSummary> out;
  const std::size_t len = set.intervals.size();
  for (double delta : deltas) {
    std::size_t good = 0, bad = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const auto& iv = set.intervals[i];
      double lo = holevo_lower_bound_from_fidelity(iv.f_hi * iv.f_hi);
      double hi = holevo_upper_bound_from_fidelity(iv.f_lo * iv.f_lo);
      if (set.exact) lo = hi = (*set.exact)[i].holevo;
      if (lo > 1.0 - delta) ++good;
      if (hi < delta) ++bad;
    }
    const double scale = len == 0 ? 0.0 : 1.0 / static_cast<double>(len);
    out.push_back({delta, static_cast<double>(good) * scale, static_cast<double>(bad) * scale});
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polar codes for binary-input classical-quantum channels"};
  app.require_subcommand(1);

  CodeArgs pol;
  std::string pol_out, pol_summary;
  auto* polarize = app.add_subcommand("polarize", "per-index reliabilities and polarization summary");
  polarize->add_option("--channel", pol.channel, "preset:param or JSON path")->required();
  polarize->add_option("--n", pol.n, "log2 of the block length")->required();
  polarize->add_option("--backend", pol.backend, "exact | bounds | hybrid")->capture_default_str();
  polarize->add_option("--out", pol_out, "CSV path (default stdout)");
  polarize->add_option("--summary", pol_summary, "summary JSON path (default stderr)");

  CodeArgs con;
  std::string con_out, con_csv, con_frozen = "zeros";
  std::uint64_t con_seed = 0;
  auto* construct = app.add_subcommand("construct", "choose the information set");
  add_code_args(construct, con);
  construct->add_option("--frozen", con_frozen, "zeros | random")->capture_default_str();
  construct->add_option("--seed", con_seed, "seed for random frozen bits")->capture_default_str();
  construct->add_option("--out", con_out, "JSON path (default stdout)");
  construct->add_option("--csv", con_csv, "reliability CSV path");

  CodeArgs dec;
  std::string dec_out, dec_traj, dec_info;
  std::uint64_t dec_seed = 1;
  std::size_t dec_trials = 10000;
  bool dec_helstrom = false, dec_no_exact = false, dec_frozen_avg = false;
  auto* decode = app.add_subcommand("decode", "simulate the successive-cancellation decoder");
  add_code_args(decode, dec);
  decode->add_option("--info", dec_info, "explicit 1-based information set, e.g. 3,4 (overrides the rule)");
  decode->add_option("--seed", dec_seed, "Monte Carlo seed")->capture_default_str();
  decode->add_option("--trials", dec_trials, "Monte Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  decode->add_flag("--helstrom", dec_helstrom, "use difference projectors instead of square-root differences");
  decode->add_flag("--no-exact", dec_no_exact, "skip the exact block error");
  decode->add_flag("--frozen-average", dec_frozen_avg, "also average the exact error over all frozen vectors");
  decode->add_option("--out", dec_out, "JSON path (default stdout)");
  decode->add_option("--trajectories", dec_traj, "per-step CSV path");

  std::vector<std::string> ver_suites;
  std::string ver_out;
  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", ver_suites, "suite names (default all)")->delimiter(',');
  verify->add_flag("--mutate-fidelity", ver.mutate_fidelity, "negative control: corrupt plus-child fidelities");
  verify->add_option("--seed", ver.seed, "seed for random channels and trials")->capture_default_str();
  verify->add_option("--trials", ver.trials, "Monte Carlo trials per configuration")->capture_default_str();
  verify->add_option("--random-channels", ver.random_channels, "random qubit channels")->capture_default_str();
  verify->add_option("--out", ver_out, "CSV path for the table");

  std::string bve_channel, bve_out;
  unsigned bve_n = 3;
  auto* bve = app.add_subcommand("bounds-vs-exact", "propagated intervals next to exact values");
  bve->add_option("--channel", bve_channel, "preset:param or JSON path")->required();
  bve->add_option("--n", bve_n, "log2 of the block length")->capture_default_str();
  bve->add_option("--out", bve_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Budget budget = Budget::from_environment();
    if (polarize->parsed()) {
      const auto ch = load_channel(pol.channel);
      const auto set = require(reliability_intervals(ch.channel, pol.n, parse_backend(pol.backend), budget));
      emit(pol_out, polarize_csv(set), out);
      emit(pol_summary, summary_json(ch.label, pol.n, set), err);
      return 0;
    }
    if (construct->parsed()) {
      const auto ch = load_channel(con.channel);
      auto report = require(construct_code(ch.channel, con.n, info_count(con), parse_backend(con.backend), budget,
                                           parse_frozen_policy(con_frozen), con_seed));
      report.channel_label = ch.label;
      emit(con_out, to_json(report) + "\n", out);
      if (!con_csv.empty()) emit(con_csv, intervals_csv(report.reliabilities.intervals), out);
      return 0;
    }
    if (decode->parsed()) {
      const auto ch = load_channel(dec.channel);
      const std::size_t len = std::size_t{1} << dec.n;
      const std::size_t k = dec_info.empty() ? info_count(dec) : 0;
      const auto report = require(construct_code(ch.channel, dec.n, k, parse_backend(dec.backend), budget));
      const auto values = rule_values(report.reliabilities);
      const CodeSpec spec = dec_info.empty() ? report.spec : CodeSpec(dec.n, parse_info_list(dec_info, len));
      DecoderOptions opts;
      opts.budget = budget;
      if (dec_helstrom) opts.measurement = Measurement::kHelstrom;
      const auto decoder = require(ScDecoder::create(ch.channel, dec.n, opts));
      auto mc = decode_monte_carlo(decoder, spec, dec_trials, dec_seed, !dec_traj.empty());
      mc.report.prop2_bound = error_bound(values, spec.info_set());
      if (!dec_no_exact) mc.report.exact_block_error = decoder.exact_block_error(spec);
      if (dec_frozen_avg) mc.report.frozen_averaged_block_error = decoder.frozen_averaged_block_error(spec);
      emit(dec_out, to_json(mc.report, ch.label, spec), out);
      if (!dec_traj.empty()) emit(dec_traj, trajectories_csv(mc.trajectories), out);
      return 0;
    }
    if (verify->parsed()) {
      ver.suites = ver_suites;
      ver.budget = budget;
      const auto rows = run_verify(ver);
      out << verify_table(rows);
      if (!ver_out.empty()) emit(ver_out, verify_csv(rows), out);
      for (const auto& r : rows) {
        if (!r.pass) return 1;
      }
      return 0;
    }
    if (bve->parsed()) {
      const auto ch = load_channel(bve_channel);
      const auto exact = require(exact_split_params(ch.channel, bve_n, budget));
      const auto iv = propagate_all(channel_root_fidelity(ch.channel, budget), bve_n);
      std::string text = "# schema=cqpolar.bounds_vs_exact/1\nindex,f_lo,f_hi,exact,contained\n";
      char line[160];
      for (std::size_t i = 0; i < iv.size(); ++i) {
        const double x = exact[i].root_fidelity;
        const bool in = iv[i].f_lo <= x + 1e-9 && x <= iv[i].f_hi + 1e-9;
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%d\n", i + 1, iv[i].f_lo, iv[i].f_hi, x, in ? 1 : 0);
        text += line;
      }
      emit(bve_out, text, out);
      return 0;
    }
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace cqpolar
