#include "cqpolar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cqpolar/bounds.hpp"
#include "cqpolar/construction.hpp"
#include "cqpolar/cq_channel.hpp"
#include "cqpolar/polar_transform.hpp"
#include "cqpolar/random.hpp"
#include "cqpolar/sc_decoder.hpp"
#include "cqpolar/synthesis.hpp"

namespace cqpolar {
namespace {

using Tree = std::vector<std::vector<ChannelParams>>;

struct NamedChannel {
  std::string label;
  BinaryCQChannel channel;
  std::optional<Tree> tree;  // levels 0..3
};

class Collector {
 public:
  // Records lhs - rhs for a check of the form lhs <= rhs + tolerance.
  void le(double lhs, double rhs, double tolerance) { add(lhs - rhs, tolerance); }
  void eq(double a, double b, double tolerance) { add(std::abs(a - b), tolerance); }
  void fail_unless(bool ok) {
    if (!ok) pass_ = false;
  }
  VerifyRow row(std::string property, std::string channel, unsigned n) const {
    return VerifyRow{std::move(property), std::move(channel), n, worst_, pass_};
  }

 private:
  void add(double excess, double tolerance) {
    if (!std::isfinite(excess)) {
      pass_ = false;
      worst_ = std::numeric_limits<double>::infinity();
      return;
    }
    worst_ = std::max(worst_, excess);
    if (excess > tolerance) pass_ = false;
  }
  double worst_ = 0.0;
  bool pass_ = true;
};

class Suite {
 public:
  explicit Suite(const VerifyOptions& options) : options_(options) {
    channels_.push_back({"bsc:0.11", make_bsc(0.11), std::nullopt});
    channels_.push_back({"bec:0.5", make_bec(0.5), std::nullopt});
    channels_.push_back({"pure_overlap:0.5", make_pure_overlap(0.5), std::nullopt});
    for (std::size_t k = 0; k < options.random_channels; ++k) {
      Rng rng(derive_seed(options.seed, k));
      channels_.push_back({"random#" + std::to_string(k), random_qubit_channel(rng), std::nullopt});
    }
  }

  void run(const std::string& name, std::vector<VerifyRow>& rows) {
    if (name == "rate") return rate(rows);
    if (name == "fidelity") return fidelity(rows);
    if (name == "sandwich") return sandwich(rows);
    if (name == "oracle") return oracle(rows);
    if (name == "recursion") return recursion(rows);
    if (name == "encoder") return encoder(rows);
    if (name == "bounds") return bounds(rows);
    if (name == "decay") return decay(rows);
    if (name == "decoder") return decoder(rows);
    if (name == "sen") return sen(rows);
    throw std::invalid_argument("unknown verify suite '" + name + "'");
  }

 private:
  static constexpr unsigned kTreeLevels = 3;

  const Tree& tree(NamedChannel& c) {
    if (!c.tree) c.tree = take(synthesis_tree(c.channel, kTreeLevels, options_.budget));
    return *c.tree;
  }

  void rate(std::vector<VerifyRow>& rows) {
    for (auto& c : channels_) {
      const Tree& t = tree(c);
      for (unsigned k = 1; k <= kTreeLevels; ++k) {
        Collector col;
        double sum = 0.0;
        for (const auto& p : t[k]) sum += p.holevo;
        col.eq(sum, static_cast<double>(t[k].size()) * t[0][0].holevo, 1e-7);
        rows.push_back(col.row("rate-conservation", c.label, k));
      }
    }
  }

  void fidelity(std::vector<VerifyRow>& rows) {
    const double mutation = options_.mutate_fidelity ? 1.001 : 1.0;
    for (auto& c : channels_) {
      const Tree& t = tree(c);
      Collector plus, minus, order, bec;
      const bool is_bec = c.label.rfind("bec", 0) == 0;
      for (unsigned k = 0; k < kTreeLevels; ++k) {
        for (std::size_t j = 0; j < t[k].size(); ++j) {
          const double r = t[k][j].root_fidelity;
          const double f = r * r;
          const double r_minus = t[k + 1][2 * j].root_fidelity;
          const double r_plus = t[k + 1][2 * j + 1].root_fidelity * mutation;
          plus.eq(r_plus, f, 1e-8);
          minus.le(r_minus, 2.0 * r - f, 1e-8);
          order.le(r, r_minus, 1e-8);
          order.le(r_plus, r, 1e-8);
          if (is_bec) bec.eq(r_minus, 2.0 * r - f, 1e-9);
        }
      }
      rows.push_back(plus.row("fidelity-plus-identity", c.label, kTreeLevels));
      rows.push_back(minus.row("fidelity-minus-bound", c.label, kTreeLevels));
      rows.push_back(order.row("fidelity-ordering", c.label, kTreeLevels));
      if (is_bec) rows.push_back(bec.row("fidelity-minus-equality", c.label, kTreeLevels));
    }
  }

  void sandwich(std::vector<VerifyRow>& rows) {
    for (auto& c : channels_) {
      Collector col;
      for (const auto& level : tree(c)) {
        for (const auto& p : level) {
          const double f = std::clamp(p.fidelity, 0.0, 1.0);
          col.le(holevo_lower_bound_from_fidelity(f), p.holevo, 1e-8);
          col.le(p.holevo, holevo_upper_bound_from_fidelity(f), 1e-8);
        }
      }
      rows.push_back(col.row("holevo-fidelity-sandwich", c.label, kTreeLevels));
    }
  }

  void oracle(std::vector<VerifyRow>& rows) {
    for (double e : {0.3, 0.5, 0.7}) {
      const auto params = take(split_params(make_bec(e), 3, options_.budget));
      std::vector<double> z{e};
      for (int level = 0; level < 3; ++level) {
        std::vector<double> next;
        for (double v : z) {
          next.push_back(2.0 * v - v * v);
          next.push_back(v * v);
        }
        z = std::move(next);
      }
      Collector col;
      for (std::size_t i = 0; i < z.size(); ++i) col.eq(params[i].root_fidelity, z[i], 1e-9);
      char label[32];
      std::snprintf(label, sizeof label, "bec:%g", e);
      rows.push_back(col.row("classical-z-recursion", label, 3));
    }
  }

  void recursion(std::vector<VerifyRow>& rows) {
    for (auto& c : channels_) {
      Collector col;
      const Tree& t = tree(c);
      for (unsigned n = 1; n <= 2; ++n) {
        for (std::size_t i = 1; i <= (std::size_t{1} << n); ++i) {
          const auto p = channel_params(take(split_channel(c.channel, n, i, options_.budget)), options_.budget);
          col.eq(p.holevo, t[n][i - 1].holevo, 1e-7);
          col.eq(p.root_fidelity, t[n][i - 1].root_fidelity, 1e-7);
        }
      }
      if (pure_overlap_of(c.channel)) {
        const auto gram = take(exact_split_params(c.channel, kTreeLevels, options_.budget));
        for (std::size_t i = 0; i < gram.size(); ++i) {
          col.eq(gram[i].holevo, t[kTreeLevels][i].holevo, 1e-7);
          col.eq(gram[i].root_fidelity, t[kTreeLevels][i].root_fidelity, 1e-7);
        }
      }
      rows.push_back(col.row("recursive-vs-path", c.label, kTreeLevels));
    }
  }

  void encoder(std::vector<VerifyRow>& rows) {
    Rng rng(derive_seed(options_.seed, 1000));
    for (unsigned n = 0; n <= 6; ++n) {
      const std::size_t len = std::size_t{1} << n;
      const BitMatrix g = generator_matrix(len);
      Collector col;
      const bool exhaustive = len <= 8;
      const std::size_t count = exhaustive ? (std::size_t{1} << len) : 200;
      for (std::size_t m = 0; m < count; ++m) {
        BitVector u(len);
        for (std::size_t k = 0; k < len; ++k) {
          u[k] = static_cast<std::uint8_t>(exhaustive ? (m >> k) & 1 : rng.bit());
        }
        col.fail_unless(encode(u) == gf2_multiply(u, g));
      }
      rows.push_back(col.row("encoder-vs-generator", "-", n));
    }
  }

  void bounds(std::vector<VerifyRow>& rows) {
    for (auto& c : channels_) {
      const Tree& t = tree(c);
      Collector col;
      for (unsigned k = 1; k <= kTreeLevels; ++k) {
        const auto iv = propagate_all(t[0][0].root_fidelity, k);
        for (std::size_t i = 0; i < iv.size(); ++i) {
          col.le(iv[i].f_lo, t[k][i].root_fidelity, 1e-9);
          col.le(t[k][i].root_fidelity, iv[i].f_hi, 1e-9);
        }
      }
      rows.push_back(col.row("bounds-contain-exact", c.label, kTreeLevels));
    }
    for (std::size_t c = 0; c < 3; ++c) {
      const auto sweep = take(reliability_sweep(channels_[c].channel, 4, 20, Backend::kHybrid, options_.budget));
      Collector col;
      for (std::size_t k = 1; k < sweep.size(); ++k) {
        col.le(good_fraction(sweep[k - 1].intervals, 0.01), good_fraction(sweep[k].intervals, 0.01), 0.0);
      }
      rows.push_back(col.row("good-fraction-trend", channels_[c].label, 20));
    }
  }

  void decay(std::vector<VerifyRow>& rows) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double rate = 0.5 * holevo_information(channels_[c].channel);
      const auto sweep = take(reliability_sweep(channels_[c].channel, 4, 20, Backend::kHybrid, options_.budget));
      Collector col;
      double previous = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < sweep.size(); ++k) {
        auto values = rule_values(sweep[k]);
        const std::size_t count = info_count_for_rate(rate, static_cast<unsigned>(k + 4));
        std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(count), values.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < count; ++i) sum += values[i];
        if (k > 0) col.le(sum, previous, 0.0);
        previous = sum;
      }
      rows.push_back(col.row("rate-half-sum-decay", channels_[c].label, 20));
    }
  }

  std::vector<double> root_fidelities(const BinaryCQChannel& w, unsigned n) {
    std::vector<double> out;
    for (const auto& p : take(exact_split_params(w, n, options_.budget))) out.push_back(p.root_fidelity);
    return out;
  }

  void decoder(std::vector<VerifyRow>& rows) {
    const std::vector<std::size_t> picks{0, 2, 3};  // bsc, pure, first random channel
    for (std::size_t c : picks) {
      if (c >= channels_.size()) continue;
      const auto& ch = channels_[c];
      for (unsigned n = 1; n <= 2; ++n) {
        const auto r = root_fidelities(ch.channel, n);
        const auto dec = take(ScDecoder::create(ch.channel, n, {Measurement::kSquareRootDifference, options_.budget}));
        Collector prop2, chain, step;
        for (std::size_t k = 0; k <= r.size(); ++k) {
          const CodeSpec spec(n, select_information_set(r, k));
          const double pe = dec.frozen_averaged_block_error(spec);
          prop2.le(pe, error_bound(r, spec.info_set()), 1e-8);
          chain.le(pe, 2.0 * std::sqrt(dec.average_projector_failure(spec)), 1e-8);
        }
        for (std::size_t i = 0; i < r.size(); ++i) step.le(dec.step_error(i), 0.5 * r[i], 1e-8);
        rows.push_back(prop2.row("decoder-error-bound", ch.label, n));
        rows.push_back(chain.row("decoder-union-chain", ch.label, n));
        rows.push_back(step.row("decoder-step-vs-fidelity", ch.label, n));
      }
    }
    for (std::size_t c : {std::size_t{0}, std::size_t{2}}) {
      const auto& ch = channels_[c];
      const auto r = root_fidelities(ch.channel, 3);
      const auto dec = take(ScDecoder::create(ch.channel, 3, {Measurement::kSquareRootDifference, options_.budget}));
      Collector prop2;
      for (std::size_t k = 0; k <= 6; ++k) {
        const CodeSpec spec(3, select_information_set(r, k));
        prop2.le(dec.exact_block_error(spec), error_bound(r, spec.info_set()), 1e-8);
      }
      rows.push_back(prop2.row("decoder-error-bound-zeros", ch.label, 3));
    }
  }

  void sen(std::vector<VerifyRow>& rows) {
    {
      Matrix plus(2, 2);
      plus.setConstant(Complex(0.5, 0.0));
      Matrix zero = Matrix::Zero(2, 2);
      zero(0, 0) = 1.0;
      const std::vector<ProjectorMatrix> seq{ProjectorMatrix(plus), ProjectorMatrix(zero)};
      const auto check = sen_bound_check(seq, DensityOperator::from_matrix(zero));
      Collector col, commuting;
      col.le(check.lhs, check.rhs, kSenTolerance);
      // The commuting-style sum is rhs^2 / 4; the example must break it.
      commuting.fail_unless(check.lhs > 0.25 * check.rhs * check.rhs + 1e-6);
      rows.push_back(col.row("sen-counterexample", "projector-pair", 1));
      rows.push_back(commuting.row("sen-counterexample-commuting-fails", "projector-pair", 1));
    }
    struct Config {
      std::string label;
      BinaryCQChannel channel;
      unsigned n;
      std::vector<std::size_t> info;
    };
    const std::vector<Config> configs{
        {"pure_overlap:0", make_pure_overlap(0.0), 2, {2, 3}},
        {"pure_overlap:1", make_pure_overlap(1.0), 1, {0, 1}},
        {"bec:0.5", make_bec(0.5), 2, {2, 3}},
        {"pure_overlap:0.5", make_pure_overlap(0.5), 2, {1, 3}},
        {"bsc:0.11", make_bsc(0.11), 2, {1, 3}},
    };
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const auto& cfg = configs[k];
      const auto dec = take(ScDecoder::create(cfg.channel, cfg.n, {Measurement::kSquareRootDifference, options_.budget}));
      const CodeSpec spec(cfg.n, cfg.info);
      const auto mc = decode_monte_carlo(dec, spec, options_.trials, derive_seed(options_.seed, 2000 + k));
      const auto& rep = mc.report;
      Collector sen, agree;
      sen.le(rep.sen_max_margin, 0.0, kSenTolerance);
      sen.fail_unless(rep.sen_checks_passed == rep.sen_checks_total && rep.aborted == 0);
      const double exact = dec.exact_block_error(spec);
      const double done = static_cast<double>(rep.trials - rep.aborted);
      const double sigma = std::max(rep.mc_stderr, std::sqrt(std::max(0.0, exact * (1.0 - exact)) / done));
      agree.le(std::abs(rep.mc_estimate - exact), 4.0 * sigma, 1e-12);
      rows.push_back(sen.row("sen-trajectories", cfg.label, cfg.n));
      rows.push_back(agree.row("monte-carlo-vs-exact", cfg.label, cfg.n));
    }
  }

  VerifyOptions options_;
  std::vector<NamedChannel> channels_;
};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"rate",   "fidelity", "sandwich", "oracle",  "recursion",
                                              "encoder", "bounds",  "decoder",  "sen"};
  return names;
}

std::vector<VerifyRow> run_verify(const VerifyOptions& options) {
  const auto& defaults = verify_suite_names();
  const std::vector<std::string> selected = options.suites.empty() ? defaults : options.suites;
  for (const auto& s : selected) {
    if (s != "decay" && std::find(defaults.begin(), defaults.end(), s) == defaults.end()) {
      throw std::invalid_argument("unknown verify suite '" + s + "'");
    }
  }
  Suite suite(options);
  std::vector<VerifyRow> rows;
  for (const auto& s : selected) suite.run(s, rows);
  return rows;
}

std::string verify_table(const std::vector<VerifyRow>& rows) {
  std::ostringstream os;
  char line[200];
  std::snprintf(line, sizeof line, "%-30s %-18s %3s %14s  %s\n", "property", "channel", "n", "max_violation",
                "status");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-30s %-18s %3u %14.3e  %s\n", r.property.c_str(), r.channel.c_str(), r.n,
                  r.max_violation, r.pass ? "PASS" : "FAIL");
    os << line;
  }
  return os.str();
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::ostringstream os;
  os << "# schema=cqpolar.verify/1\nproperty,channel,n,max_violation,pass\n";
  char line[200];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%s,%u,%.17g,%d\n", r.property.c_str(), r.channel.c_str(), r.n,
                  r.max_violation, r.pass ? 1 : 0);
    os << line;
  }
  return os.str();
}

}  // namespace cqpolar
