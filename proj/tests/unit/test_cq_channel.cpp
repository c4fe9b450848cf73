#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cqpolar/channel_spec.hpp"
#include "cqpolar/cq_channel.hpp"
#include "helpers.hpp"

using namespace cqpolar;
using testing_helpers::channel_from;
using testing_helpers::states_of;

TEST(Presets, BscParameters) {
  for (double p : {0.0, 0.11, 0.3, 0.5}) {
    const auto params = channel_params(make_bsc(p));
    EXPECT_NEAR(params.holevo, 1.0 - oracle::binary_entropy(p), 1e-12);
    EXPECT_NEAR(params.root_fidelity, 2.0 * std::sqrt(p * (1.0 - p)), 1e-12);
    EXPECT_NEAR(params.fidelity, 4.0 * p * (1.0 - p), 1e-12);
  }
}

TEST(Presets, BecParameters) {
  for (double e : {0.0, 0.3, 0.5, 1.0}) {
    const auto params = channel_params(make_bec(e));
    EXPECT_NEAR(params.holevo, 1.0 - e, 1e-12);
    EXPECT_NEAR(params.root_fidelity, e, 1e-12);
  }
}

TEST(Presets, PureOverlapParameters) {
  for (double c : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const auto params = channel_params(make_pure_overlap(c));
    const auto [r0, r1] = oracle::pure_pair(c);
    EXPECT_NEAR(params.root_fidelity, c, 1e-12);
    EXPECT_NEAR(params.holevo, oracle::holevo(r0, r1), 1e-10);
    EXPECT_NEAR(params.holevo, oracle::binary_entropy((1.0 - c) / 2.0), 1e-10);
  }
  EXPECT_NEAR(holevo_information(make_pure_overlap(0.5)), 0.8112781244591328, 1e-10);
  EXPECT_THROW(make_pure_overlap(1.5), std::invalid_argument);
}

TEST(Presets, BpskOverlap) {
  for (double a : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR(channel_root_fidelity(make_bpsk(a)), std::exp(-2.0 * a * a), 1e-10);
  }
}

TEST(Presets, ClassicalValidation) {
  EXPECT_THROW(make_classical({0.5, 0.5}, {1.0}), std::invalid_argument);
  EXPECT_THROW(make_classical({1.5, -0.5}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_TRUE(make_classical({0.2, 0.8}, {0.6, 0.4}).is_diagonal());
}

TEST(Channel, FromBranchesValidates) {
  const auto w = make_bsc(0.2);
  std::vector<ChannelBranch> b(w.branches().begin(), w.branches().end());
  b.front().weight = 0.7;
  EXPECT_THROW(BinaryCQChannel::from_branches(b), LinalgError);
  EXPECT_THROW(BinaryCQChannel::from_branches({}), LinalgError);
  EXPECT_THROW(BinaryCQChannel(DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(3)),
               LinalgError);
}

TEST(Channel, RandomChannelsMatchOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_qubit_channel(rng);
    const auto [r0, r1] = states_of(w);
    const auto p = channel_params(w);
    EXPECT_NEAR(p.holevo, oracle::holevo(r0, r1), 1e-10);
    EXPECT_NEAR(p.root_fidelity, oracle::root_fidelity(r0, r1), 1e-10);
  }
}

TEST(Channel, HolevoFidelitySandwichOnRandomChannels) {
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const BinaryCQChannel w = trial % 2 == 0 ? random_qubit_channel(rng)
                                             : BinaryCQChannel(random_density_operator(rng, 3),
                                                               random_density_operator(rng, 3));
    const auto p = channel_params(w);
    EXPECT_LE(holevo_lower_bound_from_fidelity(p.fidelity), p.holevo + 1e-8);
    EXPECT_LE(p.holevo, holevo_entropy_bound_from_fidelity(p.fidelity) + 1e-8);
    EXPECT_LE(holevo_entropy_bound_from_fidelity(p.fidelity), holevo_upper_bound_from_fidelity(p.fidelity) + 1e-8);
  }
}

TEST(Channel, BoundFunctionsRejectOutOfRange) {
  EXPECT_THROW(holevo_lower_bound_from_fidelity(-0.1), std::invalid_argument);
  EXPECT_THROW(holevo_upper_bound_from_fidelity(1.1), std::invalid_argument);
  EXPECT_NEAR(holevo_lower_bound_from_fidelity(0.0), 1.0, 1e-15);
  EXPECT_NEAR(holevo_upper_bound_from_fidelity(1.0), 0.0, 1e-15);
}

TEST(Channel, RealFramePreservesParameters) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = random_qubit_channel(rng);
    const auto v = real_frame(w);
    const auto [r0, r1] = states_of(v);
    EXPECT_LT(r0.imag().norm() + r1.imag().norm(), 1e-12);
    EXPECT_NEAR(channel_params(v).holevo, channel_params(w).holevo, 1e-10);
    EXPECT_NEAR(channel_params(v).root_fidelity, channel_params(w).root_fidelity, 1e-10);
  }
}

TEST(ChannelSpec, PresetsAndShorthand) {
  EXPECT_NEAR(channel_root_fidelity(load_channel("bsc:0.11").channel), 2.0 * std::sqrt(0.11 * 0.89), 1e-12);
  EXPECT_EQ(load_channel("bec:0.5").label, "bec:0.5");
  const auto doc = parse_channel_json(R"({"preset": "pure_overlap", "param": 0.5})");
  EXPECT_NEAR(channel_root_fidelity(doc.channel), 0.5, 1e-12);
  EXPECT_THROW(load_channel("nope:1"), ChannelSpecError);
  EXPECT_THROW(load_channel("bsc:abc"), ChannelSpecError);
  EXPECT_THROW(load_channel("/nonexistent/file.json"), ChannelSpecError);
}

TEST(ChannelSpec, ExplicitMatrices) {
  const auto doc = parse_channel_json(
      R"({"dim": 2, "rho0": [[1,0],[0,0],[0,0],[0,0]], "rho1": [[0.5,0],[0.5,0],[0.5,0],[0.5,0]]})");
  EXPECT_NEAR(channel_root_fidelity(doc.channel), std::sqrt(0.5), 1e-12);
  EXPECT_THROW(parse_channel_json(R"({"dim": 2, "rho0": [[1,0]], "rho1": [[1,0]]})"), ChannelSpecError);
  EXPECT_THROW(parse_channel_json(R"({"dim": 1, "rho0": [[2,0]], "rho1": [[1,0]]})"), ChannelSpecError);
  EXPECT_THROW(parse_channel_json("[1,2]"), ChannelSpecError);
  EXPECT_THROW(parse_channel_json("{not json"), ChannelSpecError);

  const std::string path = ::testing::TempDir() + "channel.json";
  {
    std::ofstream f(path);
    f << R"({"preset": "bsc", "param": 0.2})";
  }
  EXPECT_NEAR(holevo_information(load_channel(path).channel), 1.0 - oracle::binary_entropy(0.2), 1e-12);
  std::remove(path.c_str());
}
