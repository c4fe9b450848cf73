#include "cqpolar/sc_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cqpolar/parallel.hpp"
#include "cqpolar/random.hpp"

namespace cqpolar {
namespace {

constexpr std::size_t kMaxExactMessages = std::size_t{1} << 12;

std::uint64_t pack(const BitVector& bits, std::size_t count) {
  std::uint64_t key = 0;
  for (std::size_t k = 0; k < count; ++k) key = (key << 1) | bits[k];
  return key;
}

BitVector word(std::uint64_t value, std::size_t length) {
  BitVector out(length);
  for (std::size_t k = 0; k < length; ++k) out[k] = static_cast<std::uint8_t>((value >> (length - 1 - k)) & 1);
  return out;
}

double squared_norm(const Matrix& m) { return m.squaredNorm(); }

}  // namespace

SenCheck sen_bound_check(std::span<const ProjectorMatrix> sequence, const DensityOperator& rho) {
  const Matrix r = rho.dense();
  Matrix chain = r;
  double failures = 0.0;
  for (const auto& p : sequence) {
    if (p.dim() != r.rows()) throw std::invalid_argument("sen_bound_check: projector and state dimensions differ");
    failures += (r - p.matrix() * r).trace().real();
    chain = p.matrix() * chain * p.matrix();
  }
  SenCheck out;
  out.lhs = 1.0 - chain.trace().real();
  out.rhs = 2.0 * std::sqrt(std::max(0.0, failures));
  out.holds = out.lhs <= out.rhs + kSenTolerance;
  return out;
}

Budgeted<ScDecoder> ScDecoder::create(const BinaryCQChannel& base, unsigned n, DecoderOptions options) {
  if (base.branch_count() != 1) throw std::invalid_argument("ScDecoder: base channel must have a single branch");
  if (n > 6) return BudgetExceeded{"decoder block length 2^" + std::to_string(n) + " above 64"};
  const std::size_t d = base.quantum_dim();
  std::size_t total = 1;
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
    total *= d;
    if (total > options.budget.max_dense_dim) {
      return BudgetExceeded{"decoder dimension " + std::to_string(d) + "^" + std::to_string(std::size_t{1} << n) +
                            " > " + std::to_string(options.budget.max_dense_dim)};
    }
  }
  ScDecoder dec;
  dec.n_ = n;
  dec.local_dim_ = static_cast<Eigen::Index>(d);
  dec.dim_ = static_cast<Eigen::Index>(total);
  dec.options_ = options;
  // A common local unitary on every output changes no probability.
  const BinaryCQChannel w = real_frame(base);
  const auto& br = w.branches().front();
  const std::array<const ProductState*, 2> states{&br.sigma0, &br.sigma1};
  for (int b = 0; b < 2; ++b) {
    dec.rho_[b] = states[b]->materialize(d).dense();
    const Spectrum s = eig_hermitian(HermitianMatrix(dec.rho_[b]));
    const double cutoff = s.values.maxCoeff() * 1e-14;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
      if (s.values(k) > cutoff) keep.push_back(k);
    }
    Matrix f(dec.local_dim_, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      f.col(static_cast<Eigen::Index>(c)) = s.vectors.col(keep[c]) * std::sqrt(s.values(keep[c]));
    }
    dec.factor_[b] = std::move(f);
  }
  dec.cache_ = std::make_shared<Cache>();
  dec.identity_ = std::make_shared<const ProjectorMatrix>(ProjectorMatrix::identity(dec.dim_));
  return dec;
}

Matrix ScDecoder::codeword_state(const BitVector& x) const {
  Matrix out = rho_[x.front()];
  for (std::size_t k = 1; k < x.size(); ++k) out = kron(out, rho_[x[k]]);
  return out;
}

Matrix ScDecoder::codeword_factor(const BitVector& x) const {
  Matrix out = factor_[x.front()];
  for (std::size_t k = 1; k < x.size(); ++k) out = kron(out, factor_[x[k]]);
  return out;
}

Matrix ScDecoder::output_factor(const BitVector& u) const {
  if (u.size() != block_length()) throw std::invalid_argument("output_factor: wrong block length");
  return codeword_factor(encode(u));
}

Matrix ScDecoder::output_state(const BitVector& u) const {
  if (u.size() != block_length()) throw std::invalid_argument("output_state: wrong block length");
  return codeword_state(encode(u));
}

Matrix ScDecoder::averaged_state(const BitVector& bits) const {
  const std::size_t len = block_length();
  if (bits.empty() || bits.size() > len) throw std::invalid_argument("averaged_state: prefix length outside 1..N");
  const std::size_t future = len - bits.size();
  BitVector u(len, 0);
  std::copy(bits.begin(), bits.end(), u.begin());
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << future); ++f) {
    for (std::size_t k = 0; k < future; ++k) {
      u[bits.size() + k] = static_cast<std::uint8_t>((f >> (future - 1 - k)) & 1);
    }
    sum += codeword_state(encode(u));
  }
  return sum / static_cast<double>(std::uint64_t{1} << future);
}

std::shared_ptr<const DecisionProjectorPair> ScDecoder::projectors(std::size_t i, const BitVector& prefix) const {
  if (i >= block_length() || prefix.size() < i) throw std::invalid_argument("projectors: bad position or prefix");
  const auto key = std::make_pair(i, pack(prefix, i));
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->pairs.find(key); it != cache_->pairs.end()) return it->second;
  }
  BitVector bits(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(i));
  bits.push_back(0);
  const Matrix avg0 = averaged_state(bits);
  bits.back() = 1;
  const Matrix avg1 = averaged_state(bits);
  Matrix diff;
  if (options_.measurement == Measurement::kHelstrom) {
    diff = avg0 - avg1;
  } else {
    diff = DensityOperator::from_trusted(avg0).sqrt() - DensityOperator::from_trusted(avg1).sqrt();
  }
  ProjectorMatrix pi0 = positive_eigenspace_projector(HermitianMatrix(diff, 1e-9));
  ProjectorMatrix pi1 = pi0.complement();
  auto pair = std::make_shared<const DecisionProjectorPair>(DecisionProjectorPair{std::move(pi0), std::move(pi1)});
  std::lock_guard lock(cache_->mutex);
  return cache_->pairs.emplace(key, std::move(pair)).first->second;
}

const ProjectorMatrix& ScDecoder::correct_projector(std::size_t i, const BitVector& u) const {
  const auto pair = projectors(i, u);
  // The cache keeps the pair alive for the decoder's lifetime.
  return u[i] == 0 ? pair->pi0 : pair->pi1;
}

double ScDecoder::success_probability(const CodeSpec& spec, const BitVector& u) const {
  if (spec.n() != n_) throw std::invalid_argument("success_probability: code and decoder lengths differ");
  Matrix l = output_factor(u);
  for (std::size_t i : spec.info_set()) l = correct_projector(i, u).matrix() * l;
  return squared_norm(l);
}

double ScDecoder::exact_block_error(const CodeSpec& spec) const {
  if (spec.n() != n_) throw std::invalid_argument("exact_block_error: code and decoder lengths differ");
  const std::size_t k = spec.info_count();
  if (k > 12 || (std::size_t{1} << k) > kMaxExactMessages) {
    throw std::invalid_argument("exact_block_error: more than 2^12 messages");
  }
  const std::size_t messages = std::size_t{1} << k;
  std::vector<BitVector> words(messages);
  std::set<std::pair<std::size_t, std::uint64_t>> needed;
  std::vector<std::pair<std::size_t, BitVector>> jobs;
  for (std::size_t m = 0; m < messages; ++m) {
    words[m] = spec.assemble(word(m, k));
    for (std::size_t i : spec.info_set()) {
      if (needed.emplace(i, pack(words[m], i)).second) jobs.emplace_back(i, words[m]);
    }
  }
  parallel_for(jobs.size(), [&](std::size_t j) { projectors(jobs[j].first, jobs[j].second); });
  std::vector<double> success(messages);
  parallel_for(messages, [&](std::size_t m) { success[m] = success_probability(spec, words[m]); });
  double total = 0.0;
  for (double s : success) total += s;
  return 1.0 - total / static_cast<double>(messages);
}

double ScDecoder::frozen_averaged_block_error(const CodeSpec& spec) const {
  const auto frozen = spec.frozen_set();
  if (frozen.size() > 12) throw std::invalid_argument("frozen_averaged_block_error: more than 2^12 frozen vectors");
  double total = 0.0;
  const std::size_t count = std::size_t{1} << frozen.size();
  for (std::size_t f = 0; f < count; ++f) {
    BitVector values(block_length(), 0);
    const BitVector bits = word(f, frozen.size());
    for (std::size_t k = 0; k < frozen.size(); ++k) values[frozen[k]] = bits[k];
    total += exact_block_error(spec.with_frozen_values(std::move(values)));
  }
  return total / static_cast<double>(count);
}

double ScDecoder::step_error(std::size_t i) const {
  if (i >= block_length() || i > 20) throw std::invalid_argument("step_error: position out of range");
  const std::size_t prefixes = std::size_t{1} << i;
  std::vector<double> err(prefixes);
  parallel_for(prefixes, [&](std::size_t p) {
    BitVector bits = word(p, i);
    const auto pair = projectors(i, bits);
    bits.push_back(0);
    const Matrix avg0 = averaged_state(bits);
    bits.back() = 1;
    const Matrix avg1 = averaged_state(bits);
    err[p] = 0.5 * ((pair->pi1.matrix() * avg0).trace().real() + (pair->pi0.matrix() * avg1).trace().real());
  });
  double total = 0.0;
  for (double e : err) total += e;
  return total / static_cast<double>(prefixes);
}

double ScDecoder::average_projector_failure(const CodeSpec& spec) const {
  if (spec.n() != n_) throw std::invalid_argument("average_projector_failure: code and decoder lengths differ");
  const std::size_t len = block_length();
  if (len > 12) throw std::invalid_argument("average_projector_failure: more than 2^12 inputs");
  const std::size_t count = std::size_t{1} << len;
  std::vector<double> fail(count);
  parallel_for(count, [&](std::size_t m) {
    const BitVector u = word(m, len);
    const Matrix l = output_factor(u);
    const double norm = squared_norm(l);
    double sum = 0.0;
    for (std::size_t i : spec.info_set()) sum += norm - squared_norm(correct_projector(i, u).matrix() * l);
    fail[m] = sum;
  });
  double total = 0.0;
  for (double f : fail) total += f;
  return total / static_cast<double>(count);
}

DecoderTrajectory ScDecoder::run_trial(const CodeSpec& spec, const BitVector& info_bits, std::uint64_t seed) const {
  if (spec.n() != n_) throw std::invalid_argument("run_trial: code and decoder lengths differ");
  Rng rng(seed);
  DecoderTrajectory t;
  t.message = spec.assemble(info_bits);
  t.estimate.assign(block_length(), 0);
  const Matrix start = output_factor(t.message);
  const double norm = squared_norm(start);
  Matrix state = start;
  Matrix correct = start;
  double realized_fail = 0.0;
  double correct_fail = 0.0;
  for (std::size_t i = 0; i < block_length(); ++i) {
    DecoderStep step;
    step.index = i;
    if (!spec.is_info(i)) {
      step.frozen = true;
      step.outcome = t.message[i];
      t.estimate[i] = t.message[i];
      t.steps.push_back(step);
      continue;
    }
    const double trace = squared_norm(state);
    if (trace < kCollapseFloor) {
      t.aborted = true;
      t.residual_trace = trace;
      return t;
    }
    const auto pair = projectors(i, t.estimate);
    const Matrix kept0 = pair->pi0.matrix() * state;
    const double q0 = squared_norm(kept0);
    const double q1 = std::max(0.0, trace - q0);
    step.p0 = q0 / trace;
    step.p1 = q1 / trace;
    step.outcome = rng.uniform() * trace < q0 ? 0 : 1;
    state = step.outcome == 0 ? kept0 : Matrix(state - kept0);
    t.estimate[i] = static_cast<std::uint8_t>(step.outcome);
    t.steps.push_back(step);

    const ProjectorMatrix& realized = step.outcome == 0 ? pair->pi0 : pair->pi1;
    realized_fail += norm - squared_norm(realized.matrix() * start);
    const ProjectorMatrix& right = correct_projector(i, t.message);
    correct_fail += norm - squared_norm(right.matrix() * start);
    correct = right.matrix() * correct;
  }
  t.residual_trace = squared_norm(state);
  t.success = t.estimate == t.message;
  auto check = [](double lhs, double fail) {
    SenCheck s;
    s.lhs = lhs;
    s.rhs = 2.0 * std::sqrt(std::max(0.0, fail));
    s.holds = s.lhs <= s.rhs + kSenTolerance;
    return s;
  };
  t.sen_realized_path = check(1.0 - t.residual_trace, realized_fail);
  t.sen_correct_path = check(1.0 - squared_norm(correct), correct_fail);
  return t;
}

MonteCarloResult decode_monte_carlo(const ScDecoder& decoder, const CodeSpec& spec, std::size_t trials,
                                    std::uint64_t seed, bool keep_trajectories) {
  if (trials == 0) throw std::invalid_argument("decode_monte_carlo: trials must be >= 1");
  std::vector<DecoderTrajectory> runs(trials);
  parallel_for(trials, [&](std::size_t t) {
    const std::uint64_t stream = derive_seed(seed, t);
    Rng rng(stream);
    BitVector info(spec.info_count());
    for (auto& b : info) b = static_cast<std::uint8_t>(rng.bit());
    runs[t] = decoder.run_trial(spec, info, splitmix64(stream));
  });
  MonteCarloResult out;
  ErrorReport& r = out.report;
  r.trials = trials;
  r.sen_max_margin = -1.0;
  for (const auto& t : runs) {
    if (t.aborted) {
      ++r.aborted;
      continue;
    }
    if (!t.success) ++r.errors;
    for (const SenCheck* s : {&t.sen_realized_path, &t.sen_correct_path}) {
      ++r.sen_checks_total;
      if (s->holds) ++r.sen_checks_passed;
      r.sen_max_margin = std::max(r.sen_max_margin, s->lhs - s->rhs);
    }
    // Sum of single-step failures, recovered from rhs = 2 sqrt(sum).
    const double sum = 0.25 * t.sen_realized_path.rhs * t.sen_realized_path.rhs;
    if (t.sen_realized_path.lhs > sum + kSenTolerance) ++r.commuting_bound_failures;
  }
  const std::size_t done = trials - r.aborted;
  if (done > 0) {
    const double p = static_cast<double>(r.errors) / static_cast<double>(done);
    r.mc_estimate = p;
    r.mc_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(done));
  }
  if (keep_trajectories) out.trajectories = std::move(runs);
  return out;
}

std::string to_json(const ErrorReport& report, const std::string& channel_label, const CodeSpec& spec) {
  nlohmann::ordered_json j;
  j["schema"] = "cqpolar.error_report/1";
  j["channel"] = channel_label;
  j["n"] = spec.n();
  j["N"] = spec.block_length();
  j["K"] = spec.info_count();
  auto info = nlohmann::ordered_json::array();
  for (std::size_t i : spec.info_set()) info.push_back(i + 1);
  j["info_set"] = info;
  j["exact_block_error"] = report.exact_block_error ? nlohmann::ordered_json(*report.exact_block_error) : nullptr;
  j["frozen_averaged_block_error"] =
      report.frozen_averaged_block_error ? nlohmann::ordered_json(*report.frozen_averaged_block_error) : nullptr;
  j["mc_estimate"] = report.mc_estimate;
  j["mc_stderr"] = report.mc_stderr;
  j["trials"] = report.trials;
  j["errors"] = report.errors;
  j["aborted"] = report.aborted;
  j["prop2_bound"] = report.prop2_bound;
  j["sen_checks_passed"] = report.sen_checks_passed;
  j["sen_checks_total"] = report.sen_checks_total;
  j["sen_max_margin"] = report.sen_max_margin;
  j["commuting_bound_failures"] = report.commuting_bound_failures;
  return j.dump(2) + "\n";
}

std::string trajectories_csv(const std::vector<DecoderTrajectory>& trajectories) {
  std::ostringstream os;
  os << "# schema=cqpolar.trajectory/1\n";
  os << "trial,index,frozen,outcome,p0,p1\n";
  os << std::setprecision(17);
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    for (const auto& s : trajectories[t].steps) {
      os << t << ',' << s.index + 1 << ',' << (s.frozen ? 1 : 0) << ',' << s.outcome << ',' << s.p0 << ','
         << s.p1 << '\n';
    }
  }
  return os.str();
}

}  // namespace cqpolar
