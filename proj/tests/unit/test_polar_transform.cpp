#include <gtest/gtest.h>

#include <algorithm>

#include "cqpolar/polar_transform.hpp"
#include "cqpolar/random.hpp"
#include "oracles.hpp"

using namespace cqpolar;

namespace {

BitVector random_bits(Rng& rng, std::size_t len) {
  BitVector b(len);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng.bit());
  return b;
}

}  // namespace

TEST(Encoder, G4MatchesPrintedMatrix) {
  const BitMatrix expected{{1, 0, 0, 0}, {1, 0, 1, 0}, {1, 1, 0, 0}, {1, 1, 1, 1}};
  EXPECT_EQ(generator_matrix(4), expected);
}

TEST(Encoder, ExhaustiveAgainstExplicitGenerator) {
  for (std::size_t len : {1u, 2u, 4u, 8u}) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const auto u = oracle::bits_of(v, len);
      ASSERT_EQ(encode(u), oracle::encode(u)) << len << " " << v;
    }
  }
}

TEST(Encoder, RandomInputsUpTo64) {
  Rng rng(41);
  for (std::size_t len : {16u, 32u, 64u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto u = random_bits(rng, len);
      ASSERT_EQ(encode(u), oracle::encode(u));
    }
  }
}

TEST(Encoder, GeneratorRowsAndMultiply) {
  const BitMatrix g = generator_matrix(16);
  const auto ref = oracle::generator(16);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(g[i], ref[i]);
  Rng rng(42);
  const auto u = random_bits(rng, 16);
  EXPECT_EQ(gf2_multiply(u, g), encode(u));
  EXPECT_THROW(gf2_multiply(BitVector(3), g), std::invalid_argument);
  EXPECT_THROW(generator_matrix(8192), std::invalid_argument);
}

TEST(Encoder, IsAnInvolution) {
  Rng rng(43);
  for (std::size_t len : {2u, 256u, 4096u}) {
    const auto u = random_bits(rng, len);
    EXPECT_EQ(encode(encode(u)), u);
  }
}

TEST(Encoder, IsLinear) {
  Rng rng(44);
  const auto a = random_bits(rng, 128), b = random_bits(rng, 128);
  BitVector s(128);
  for (std::size_t k = 0; k < 128; ++k) s[k] = a[k] ^ b[k];
  const auto ea = encode(a), eb = encode(b), es = encode(s);
  for (std::size_t k = 0; k < 128; ++k) EXPECT_EQ(es[k], ea[k] ^ eb[k]);
}

TEST(Encoder, RejectsNonPowerOfTwo) {
  EXPECT_THROW(encode(BitVector(6)), std::invalid_argument);
  EXPECT_THROW(log2_exact(12), std::invalid_argument);
  EXPECT_EQ(log2_exact(1024), 10u);
  EXPECT_TRUE(is_power_of_two(1));
  EXPECT_FALSE(is_power_of_two(0));
}

TEST(BitReversal, SmallCase) {
  const std::vector<std::size_t> expected{0, 4, 2, 6, 1, 5, 3, 7};
  EXPECT_EQ(bit_reversal_permutation(8), expected);
  const auto p = bit_reversal_permutation(1024);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[p[i]], i);
}

TEST(CodeSpec, Validation) {
  EXPECT_THROW(CodeSpec(2, {0, 0}), std::invalid_argument);
  EXPECT_THROW(CodeSpec(2, {4}), std::invalid_argument);
  EXPECT_THROW(CodeSpec(2, {1}, BitVector{0, 1, 0}), std::invalid_argument);
  EXPECT_THROW(CodeSpec(2, {1}, BitVector{0, 1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(CodeSpec(2, {1}, BitVector{0, 0, 2, 0}), std::invalid_argument);
  EXPECT_NO_THROW(CodeSpec(2, {}, BitVector{1, 1, 1, 1}));
}

TEST(CodeSpec, AssembleExtractRoundTrip) {
  const CodeSpec spec(3, {7, 3, 5}, BitVector{1, 0, 1, 0, 0, 0, 1, 0});
  EXPECT_EQ(spec.info_set(), (std::vector<std::size_t>{3, 5, 7}));
  EXPECT_EQ(spec.frozen_set(), (std::vector<std::size_t>{0, 1, 2, 4, 6}));
  const BitVector info{1, 0, 1};
  const BitVector u = spec.assemble(info);
  EXPECT_EQ(u, (BitVector{1, 0, 1, 1, 0, 0, 1, 1}));
  EXPECT_EQ(spec.extract(u), info);
  EXPECT_EQ(coset_encode(spec, info), oracle::encode(u));
  EXPECT_THROW(spec.assemble(BitVector{1}), std::invalid_argument);
}

TEST(CodeSpec, JsonRoundTripUsesOneBasedIndices) {
  const CodeSpec spec(2, {2, 3}, BitVector{1, 0, 0, 0});
  const std::string json = spec.to_json();
  EXPECT_NE(json.find("\"info_set\""), std::string::npos);
  EXPECT_NE(json.find("cqpolar.codespec/1"), std::string::npos);
  const CodeSpec back = CodeSpec::from_json(json);
  EXPECT_EQ(back, spec);
  const CodeSpec minimal = CodeSpec::from_json(R"({"n": 2, "info_set": [3, 4]})");
  EXPECT_EQ(minimal.info_set(), (std::vector<std::size_t>{2, 3}));
  EXPECT_THROW(CodeSpec::from_json(R"({"n": 2, "info_set": [0]})"), std::invalid_argument);
  EXPECT_THROW(CodeSpec::from_json(R"({"n": 2, "K": 3, "info_set": [1]})"), std::invalid_argument);
  EXPECT_THROW(CodeSpec::from_json("nope"), std::invalid_argument);
}
