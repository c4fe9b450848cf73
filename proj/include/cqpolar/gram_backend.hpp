#pragma once

// Split-channel parameters for a pure-state base channel with real overlap c.
//
// With the prefix fixed to zero (the parameters do not depend on it), the
// averaged state for bit value b is a uniform mixture of the product vectors
// of the codewords (0..0, b, h) G_N over all h in {0,1}^m, m = N - i. Their
// Gram entries are c^weight and depend only on h ^ h', so every block is
// diagonalized by the Walsh-Hadamard transform and no d^N matrix is formed.

#include <cstddef>
#include <optional>
#include <vector>

#include "cqpolar/budget.hpp"
#include "cqpolar/cq_channel.hpp"

namespace cqpolar {

// In-place unnormalized Walsh-Hadamard transform; length a power of two.
void walsh_hadamard(std::vector<double>& values);

// indices are 1-based; result is aligned with indices.
Budgeted<std::vector<ChannelParams>> gram_split_params(double overlap, unsigned n,
                                                       const std::vector<std::size_t>& indices,
                                                       const Budget& budget = {});

// Every index whose component count fits the budget, in index order; the
// others are absent (std::nullopt).
std::vector<std::optional<ChannelParams>> gram_split_params_feasible(double overlap, unsigned n,
                                                                     const Budget& budget = {});

}  // namespace cqpolar
