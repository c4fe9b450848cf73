#pragma once

#include <utility>

#include "cqpolar/cq_channel.hpp"
#include "oracles.hpp"

namespace testing_helpers {

inline cqpolar::BinaryCQChannel channel_from(const std::pair<oracle::Mat, oracle::Mat>& pair) {
  return cqpolar::BinaryCQChannel(cqpolar::DensityOperator::from_matrix(pair.first),
                                  cqpolar::DensityOperator::from_matrix(pair.second));
}

// Dense outputs of a single-branch channel.
inline std::pair<oracle::Mat, oracle::Mat> states_of(const cqpolar::BinaryCQChannel& w) {
  const auto& b = w.branches().front();
  return {b.sigma0.materialize(b.sigma0.dim()).dense(), b.sigma1.materialize(b.sigma1.dim()).dense()};
}

}  // namespace testing_helpers
