#pragma once

// Single-step transforms (W, W) -> (W-, W+) and the recursive construction of
// the split channels W_N^(i).
//
// Index convention: i is 1-based; the bits b1..bn of i-1 (b1 most
// significant) choose minus (0) or plus (1), with b1 applied to the base
// channel first.

#include <cstddef>
#include <vector>

#include "cqpolar/budget.hpp"
#include "cqpolar/cq_channel.hpp"

namespace cqpolar {

inline constexpr double kMergeTolerance = 1e-10;

struct TransformPair {
  BinaryCQChannel minus;
  BinaryCQChannel plus;
};

// Branches (c, c') with weight w(c)w(c') and states
// 1/2 sum_{u2} sigma_{c, u2^u1} (x) sigma_{c', u2}.
Budgeted<BinaryCQChannel> transform_minus(const BinaryCQChannel& w, const Budget& budget = {});
// Branches (c, c', u1) with weight w(c)w(c')/2 and states
// sigma_{c, u2^u1} (x) sigma_{c', u2}; identical branches are then merged.
Budgeted<BinaryCQChannel> transform_plus(const BinaryCQChannel& w, const Budget& budget = {});
// Both transforms, sharing the mixtures that minus states and plus means have in common.
Budgeted<TransformPair> transform_pair(const BinaryCQChannel& w, const Budget& budget = {});

// Bits b1..bn of i-1, most significant first.
std::vector<int> split_expansion(unsigned n, std::size_t i);

Budgeted<BinaryCQChannel> split_channel(const BinaryCQChannel& base, unsigned n, std::size_t i,
                                        const Budget& budget = {});
// Parameters of W_N^(1..N), indexed 0..N-1.
Budgeted<std::vector<ChannelParams>> split_params(const BinaryCQChannel& base, unsigned n,
                                                  const Budget& budget = {});

// Parameters of every channel in the synthesis tree, level by level:
// levels[k] holds the 2^k channels of block length 2^k in index order.
Budgeted<std::vector<std::vector<ChannelParams>>> synthesis_tree(const BinaryCQChannel& base, unsigned n,
                                                                 const Budget& budget = {});

}  // namespace cqpolar
