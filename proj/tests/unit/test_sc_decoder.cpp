#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "cqpolar/construction.hpp"
#include "cqpolar/sc_decoder.hpp"
#include "cqpolar/synthesis.hpp"
#include "helpers.hpp"

using namespace cqpolar;
using testing_helpers::channel_from;

namespace {

ScDecoder decoder_for(const BinaryCQChannel& w, unsigned n, Measurement m = Measurement::kSquareRootDifference) {
  DecoderOptions opt;
  opt.measurement = m;
  return take(ScDecoder::create(w, n, opt));
}

std::vector<double> root_fidelities(const BinaryCQChannel& w, unsigned n) {
  std::vector<double> out;
  for (const auto& p : take(split_params(w, n))) out.push_back(p.root_fidelity);
  return out;
}

// Every information set of size k over N = 2^n positions.
std::vector<std::vector<std::size_t>> subsets(std::size_t len, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < len; ++i) {
      if ((mask >> i) & 1) s.push_back(i);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Decoder, SingleUsePureStatesGiveOptimalError) {
  for (double c : {0.1, 0.5, 0.9}) {
    const auto dec = decoder_for(make_pure_overlap(c), 0);
    const CodeSpec spec(0, {0});
    EXPECT_NEAR(dec.exact_block_error(spec), oracle::pure_pair_error(c), 1e-12);
  }
}

TEST(Decoder, BlockErrorMatchesBruteForceOracle) {
  Rng rng(71);
  const auto pure = oracle::pure_pair(0.5);
  const auto bsc = oracle::bsc_pair(0.11);
  const auto rnd = testing_helpers::states_of(real_frame(random_qubit_channel(rng)));
  for (const auto* pair : {&pure, &bsc, &rnd}) {
    const auto w = channel_from(*pair);
    for (bool helstrom : {false, true}) {
      const auto dec = decoder_for(w, 2, helstrom ? Measurement::kHelstrom : Measurement::kSquareRootDifference);
      for (std::size_t k = 1; k <= 4; ++k) {
        for (const auto& info : subsets(4, k)) {
          const CodeSpec spec(2, info);
          const double ref = oracle::brute_block_error(pair->first, pair->second, 4, info, oracle::Bits(4, 0), helstrom);
          EXPECT_NEAR(dec.exact_block_error(spec), ref, 1e-9);
        }
      }
    }
  }
}

TEST(Decoder, FrozenValuesAndFrozenAverage) {
  const auto pair = oracle::pure_pair(0.6);
  const auto dec = decoder_for(channel_from(pair), 2);
  const std::vector<std::size_t> info{1, 3};
  double avg = 0.0;
  for (std::uint64_t f = 0; f < 4; ++f) {
    oracle::Bits frozen(4, 0);
    frozen[0] = static_cast<std::uint8_t>(f >> 1);
    frozen[2] = static_cast<std::uint8_t>(f & 1);
    const CodeSpec spec(2, info, frozen);
    const double ref = oracle::brute_block_error(pair.first, pair.second, 4, info, frozen);
    EXPECT_NEAR(dec.exact_block_error(spec), ref, 1e-9);
    avg += ref / 4.0;
  }
  EXPECT_NEAR(dec.frozen_averaged_block_error(CodeSpec(2, info)), avg, 1e-9);
}

TEST(Decoder, DegenerateCodes) {
  const auto dec = decoder_for(make_pure_overlap(0.5), 2);
  EXPECT_NEAR(dec.exact_block_error(CodeSpec(2, {})), 0.0, 1e-12);
  // Identical outputs carry nothing: every decision is a coin the decoder always calls 0.
  const auto useless = decoder_for(make_bsc(0.5), 2);
  for (std::size_t k = 1; k <= 4; ++k) {
    const CodeSpec spec(2, subsets(4, k).front());
    EXPECT_NEAR(useless.exact_block_error(spec), 1.0 - std::pow(2.0, -static_cast<double>(k)), 1e-12);
  }
}

TEST(Decoder, AveragedStateMatchesOracle) {
  const auto pair = oracle::pure_pair(0.4);
  const auto dec = decoder_for(channel_from(pair), 2);
  for (const oracle::Bits head : {oracle::Bits{0}, oracle::Bits{1, 0}, oracle::Bits{1, 1, 0}, oracle::Bits{0, 1, 1, 0}}) {
    EXPECT_LT((dec.averaged_state(head) - oracle::averaged_state(pair.first, pair.second, 4, head)).norm(), 1e-12);
  }
  const BitVector u{1, 0, 1, 1};
  EXPECT_LT((dec.output_state(u) - oracle::codeword_state(pair.first, pair.second, oracle::encode(u))).norm(), 1e-12);
  const Matrix l = dec.output_factor(u);
  EXPECT_LT((l * l.adjoint() - dec.output_state(u)).norm(), 1e-12);
  const auto [p0, p1] = oracle::decision_pair(pair.first, pair.second, 4, {1}, false);
  const auto pp = dec.projectors(1, BitVector{1});
  EXPECT_LT((pp->pi0.matrix() - p0).norm(), 1e-9);
  EXPECT_LT((pp->pi1.matrix() - p1).norm(), 1e-9);
  EXPECT_EQ(pp.get(), dec.projectors(1, BitVector{1}).get());
}

TEST(Decoder, ErrorStaysBelowFidelityBound) {
  for (const auto& w : {make_pure_overlap(0.5), make_bsc(0.11)}) {
    const auto dec = decoder_for(w, 3);
    const auto f = root_fidelities(w, 3);
    for (std::size_t k = 0; k <= 4; ++k) {
      const auto info = select_information_set(f, k);
      const CodeSpec spec(3, info);
      EXPECT_LE(dec.exact_block_error(spec), error_bound(f, info) + 1e-9) << k;
    }
  }
}

TEST(Decoder, FrozenAverageBelowBoundForEverySet) {
  const auto w = make_pure_overlap(0.7);
  const auto dec = decoder_for(w, 2);
  const auto f = root_fidelities(w, 2);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (const auto& info : subsets(4, k)) {
      EXPECT_LE(dec.frozen_averaged_block_error(CodeSpec(2, info)), error_bound(f, info) + 1e-9);
    }
  }
}

TEST(Decoder, StepErrorWithinHalfRootFidelity) {
  Rng rng(72);
  for (const auto& w : {make_pure_overlap(0.5), random_qubit_channel(rng)}) {
    const auto dec = decoder_for(w, 2);
    const auto f = root_fidelities(w, 2);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(dec.step_error(i), 0.5 * f[i] + 1e-9) << i;
  }
}

TEST(Decoder, ProjectorFailureSumControlsBlockError) {
  const auto w = make_pure_overlap(0.5);
  const auto dec = decoder_for(w, 2);
  const CodeSpec spec(2, {1, 3});
  const double failure = dec.average_projector_failure(spec);
  EXPECT_LE(dec.frozen_averaged_block_error(spec), 2.0 * std::sqrt(failure) + 1e-9);
  EXPECT_NEAR(failure, dec.step_error(1) + dec.step_error(3), 1e-9);
}

TEST(Sen, CommutingCounterexample) {
  const ProjectorMatrix plus(oracle::ket_projector(std::sqrt(0.5), std::sqrt(0.5)));
  const ProjectorMatrix zero(oracle::ket_projector(1.0, 0.0));
  ComplexVector e0 = ComplexVector::Zero(2);
  e0(0) = 1.0;
  const std::vector<ProjectorMatrix> seq{plus, zero};
  const auto check = sen_bound_check(seq, DensityOperator::pure(e0));
  EXPECT_NEAR(check.lhs, 0.75, 1e-12);
  EXPECT_NEAR(check.rhs, 2.0 * std::sqrt(0.5), 1e-12);
  EXPECT_TRUE(check.holds);
  // The bound without the square root fails here.
  EXPECT_GT(check.lhs, 0.5);
}

TEST(Sen, HoldsOnRandomProjectorSequences) {
  Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index dim = 4;
    std::vector<ProjectorMatrix> seq;
    for (int k = 0; k < 5; ++k) {
      Matrix g(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
      }
      seq.push_back(positive_eigenspace_projector(HermitianMatrix(Matrix(g + g.adjoint()))));
    }
    EXPECT_TRUE(sen_bound_check(seq, random_density_operator(rng, dim)).holds);
  }
}

TEST(MonteCarlo, AgreesWithExactValue) {
  const auto dec = decoder_for(make_bec(0.5), 2);
  const CodeSpec spec(2, {2, 3});
  const double exact = dec.exact_block_error(spec);
  EXPECT_NEAR(exact, 0.234375, 1e-12);
  const auto mc = decode_monte_carlo(dec, spec, 4000, 5).report;
  const double sigma = std::sqrt(exact * (1 - exact) / 4000.0);
  EXPECT_LT(std::abs(mc.mc_estimate - exact), 4 * sigma);
  EXPECT_EQ(mc.trials, 4000u);
  EXPECT_EQ(mc.sen_checks_passed, mc.sen_checks_total);
  EXPECT_GE(mc.sen_checks_total, 2 * (mc.trials - mc.aborted));
}

TEST(MonteCarlo, TrajectoriesAreConsistentAndDeterministic) {
  const auto dec = decoder_for(make_pure_overlap(0.5), 2);
  const CodeSpec spec(2, {1, 3}, BitVector{1, 0, 0, 0});
  const auto a = decode_monte_carlo(dec, spec, 200, 9, true);
  const auto b = decode_monte_carlo(dec, spec, 200, 9, true);
  ASSERT_EQ(a.trajectories.size(), 200u);
  std::size_t errors = 0;
  for (std::size_t t = 0; t < 200; ++t) {
    const auto& tr = a.trajectories[t];
    EXPECT_EQ(tr.estimate, b.trajectories[t].estimate);
    EXPECT_EQ(tr.message, b.trajectories[t].message);
    ASSERT_EQ(tr.steps.size(), 4u);
    EXPECT_EQ(tr.message[0], 1);
    double prob = 1.0;
    for (const auto& s : tr.steps) {
      EXPECT_EQ(s.frozen, !spec.is_info(s.index));
      EXPECT_NEAR(s.p0 + s.p1, 1.0, 1e-9);
      if (s.frozen) {
        EXPECT_EQ(s.outcome, tr.message[s.index]);
      }
      EXPECT_EQ(tr.estimate[s.index], s.outcome);
      if (!s.frozen) prob *= s.outcome == 0 ? s.p0 : s.p1;
    }
    EXPECT_NEAR(tr.residual_trace, prob, 1e-9);
    EXPECT_EQ(tr.success, tr.estimate == tr.message);
    errors += tr.success ? 0 : 1;
  }
  EXPECT_EQ(a.report.errors, errors);
  const std::string csv = trajectories_csv(a.trajectories);
  EXPECT_EQ(csv.rfind("# schema=cqpolar.trajectory/1\ntrial,index,frozen,outcome,p0,p1\n", 0), 0u);
}

TEST(Report, JsonFields) {
  const auto dec = decoder_for(make_bec(0.5), 2);
  const CodeSpec spec(2, {2, 3});
  auto report = decode_monte_carlo(dec, spec, 50, 1).report;
  report.exact_block_error = dec.exact_block_error(spec);
  const std::string json = to_json(report, "bec:0.5", spec);
  EXPECT_NE(json.find("cqpolar.error_report/1"), std::string::npos);
  EXPECT_NE(json.find("\"exact_block_error\""), std::string::npos);
  EXPECT_NE(json.find("\"bec:0.5\""), std::string::npos);
}

TEST(Budget, LargeSpacesAreRefused) {
  EXPECT_FALSE(within_budget(ScDecoder::create(make_bec(0.5), 3)));
  EXPECT_FALSE(within_budget(ScDecoder::create(make_bsc(0.1), 4)));
  EXPECT_TRUE(within_budget(ScDecoder::create(make_bsc(0.1), 3)));
  const auto a = make_bsc(0.1).branches().front();
  const auto b = make_bsc(0.3).branches().front();
  auto half = [](ChannelBranch br) {
    br.weight = 0.5;
    return br;
  };
  const auto mixed = BinaryCQChannel::from_branches({half(a), half(b)});
  EXPECT_THROW(ScDecoder::create(mixed, 1), std::invalid_argument);
}
