#include "cqpolar/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "cqpolar/parallel.hpp"

namespace cqpolar {
namespace {

using StatePair = std::array<DensityOperator, 2>;

struct Mixture {
  StatePair states;
  double root_fidelity;
};

std::optional<BudgetExceeded> check_budget(const BinaryCQChannel& w, std::size_t out_branches,
                                           const Budget& budget) {
  const std::size_t d = w.quantum_dim();
  const std::size_t out_dim = d * d;
  std::ostringstream os;
  if (d != 0 && out_dim / d != d) {
    os << "quantum dimension overflows";
  } else if (out_dim > budget.max_quantum_dim) {
    os << "quantum dimension " << out_dim << " > " << budget.max_quantum_dim;
  } else if (!w.is_diagonal() && out_dim > budget.max_dense_dim) {
    os << "dense dimension " << out_dim << " > " << budget.max_dense_dim;
  } else if (out_branches > budget.max_branches) {
    os << "branch count " << out_branches << " > " << budget.max_branches;
  } else {
    return std::nullopt;
  }
  return BudgetExceeded{os.str()};
}

std::vector<StatePair> materialize_branches(const BinaryCQChannel& w) {
  std::vector<StatePair> out;
  out.reserve(w.branch_count());
  for (const auto& b : w.branches()) {
    const std::size_t cap = b.sigma0.dim();
    out.push_back({b.sigma0.materialize(cap), b.sigma1.materialize(cap)});
  }
  return out;
}

// mixtures[c * B + c'][u1] = 1/2 sum_{u2} sigma_{c, u2^u1} (x) sigma_{c', u2}.
// The (c', c) mixture is the (c, c') one with tensor factors swapped, so only
// c <= c' is diagonalized.
std::vector<Mixture> minus_mixtures(const BinaryCQChannel& w) {
  const auto states = materialize_branches(w);
  const std::size_t count = states.size();
  const auto d = static_cast<Eigen::Index>(w.quantum_dim());
  std::vector<std::pair<std::size_t, std::size_t>> upper;
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t c2 = c; c2 < count; ++c2) upper.emplace_back(c, c2);
  }
  std::vector<std::optional<Mixture>> slots(count * count);
  parallel_for(upper.size(), [&](std::size_t k) {
    const auto [c, c2] = upper[k];
    const auto& s = states[c];
    const auto& t = states[c2];
    DensityOperator m0 = average_of_products(s[0], t[0], s[1], t[1]);
    DensityOperator m1 = average_of_products(s[1], t[0], s[0], t[1]);
    const double r = root_fidelity(m0, m1);
    slots[c * count + c2] = Mixture{StatePair{m0, m1}, r};
  });
  std::vector<Mixture> out;
  out.reserve(count * count);
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t c2 = 0; c2 < count; ++c2) {
      if (c <= c2) {
        out.push_back(*slots[c * count + c2]);
      } else {
        const auto& mirror = *slots[c2 * count + c];
        out.push_back(Mixture{{swap_tensor_factors(mirror.states[0], d, d), swap_tensor_factors(mirror.states[1], d, d)},
                              mirror.root_fidelity});
      }
    }
  }
  return out;
}

double purity(const ProductState& s) {
  double p = 1.0;
  for (const auto& f : s.factors()) p *= f.eigenvalues().squaredNorm();
  return p;
}

// Merges branches whose state pairs agree factor-wise. Candidates are bucketed
// by rounded purities, an invariant of the pair, so the scan stays near linear.
std::vector<ChannelBranch> merge_identical(std::vector<ChannelBranch> branches) {
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> buckets;
  std::vector<ChannelBranch> out;
  out.reserve(branches.size());
  for (auto& b : branches) {
    const auto key = std::make_pair(std::llround(purity(b.sigma0) * 1e6), std::llround(purity(b.sigma1) * 1e6));
    auto& bucket = buckets[key];
    bool merged = false;
    for (std::size_t k : bucket) {
      auto& rep = out[k];
      if (nearly_identical(rep.sigma0, b.sigma0, kMergeTolerance) &&
          nearly_identical(rep.sigma1, b.sigma1, kMergeTolerance)) {
        rep.weight += b.weight;
        merged = true;
        break;
      }
    }
    if (!merged) {
      bucket.push_back(out.size());
      out.push_back(std::move(b));
    }
  }
  return out;
}

RealVector diagonal_of(const ProductState& s) {
  return s.materialize(s.dim()).diagonal_entries();
}

// A classical branch is determined, up to a relabelling of its outputs, by the
// multiset of likelihood pairs (p0(y), p1(y)). Relabelling acts as the same
// permutation unitary on both states, which no downstream quantity can see,
// so branches are put in sorted order to let equivalent ones merge.
void canonicalize_diagonal(ChannelBranch& b) {
  const RealVector p0 = diagonal_of(b.sigma0);
  const RealVector p1 = diagonal_of(b.sigma1);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p0.size()));
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<Eigen::Index>(k);
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return p0(x) != p0(y) ? p0(x) < p0(y) : p1(x) < p1(y);
  });
  RealVector q0(p0.size()), q1(p1.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    q0(static_cast<Eigen::Index>(k)) = p0(order[k]);
    q1(static_cast<Eigen::Index>(k)) = p1(order[k]);
  }
  b.mean = ProductState(DensityOperator::from_trusted_diagonal(0.5 * (q0 + q1)));
  b.sigma0 = ProductState(DensityOperator::from_trusted_diagonal(std::move(q0)));
  b.sigma1 = ProductState(DensityOperator::from_trusted_diagonal(std::move(q1)));
}

std::vector<ChannelBranch> canonical_merge(std::vector<ChannelBranch> branches) {
  for (auto& b : branches) {
    if (b.sigma0.is_diagonal() && b.sigma1.is_diagonal()) canonicalize_diagonal(b);
  }
  return merge_identical(std::move(branches));
}

// A classical channel is a distribution over likelihood pairs (p0(y), p1(y)).
// The likelihood ratio is a sufficient statistic, so pooling the branches
// into one output alphabet and merging outputs of equal ratio changes no
// downstream quantity while keeping the alphabet small.
BinaryCQChannel classical_reduction(const std::vector<ChannelBranch>& branches) {
  struct Symbol {
    double angle, p0, p1;
  };
  std::vector<Symbol> symbols;
  for (const auto& b : branches) {
    const RealVector p0 = diagonal_of(b.sigma0);
    const RealVector p1 = diagonal_of(b.sigma1);
    for (Eigen::Index y = 0; y < p0.size(); ++y) {
      const double a = b.weight * p0(y);
      const double c = b.weight * p1(y);
      if (a > 0.0 || c > 0.0) symbols.push_back({std::atan2(a, c), a, c});
    }
  }
  std::sort(symbols.begin(), symbols.end(), [](const Symbol& x, const Symbol& y) { return x.angle < y.angle; });
  std::vector<Symbol> pooled;
  double group_angle = -1.0;
  for (const auto& s : symbols) {
    if (!pooled.empty() && s.angle - group_angle <= kMergeTolerance) {
      pooled.back().p0 += s.p0;
      pooled.back().p1 += s.p1;
    } else {
      pooled.push_back(s);
      group_angle = s.angle;
    }
  }
  RealVector q0(static_cast<Eigen::Index>(pooled.size())), q1(q0.size());
  for (std::size_t k = 0; k < pooled.size(); ++k) {
    q0(static_cast<Eigen::Index>(k)) = pooled[k].p0;
    q1(static_cast<Eigen::Index>(k)) = pooled[k].p1;
  }
  q0 /= q0.sum();
  q1 /= q1.sum();
  return BinaryCQChannel(DensityOperator::from_trusted_diagonal(std::move(q0)),
                         DensityOperator::from_trusted_diagonal(std::move(q1)));
}

BinaryCQChannel build_minus(const BinaryCQChannel& w, const std::vector<Mixture>& mixtures) {
  const auto br = w.branches();
  std::vector<ChannelBranch> out;
  out.reserve(mixtures.size());
  for (std::size_t c = 0; c < br.size(); ++c) {
    for (std::size_t c2 = 0; c2 < br.size(); ++c2) {
      const auto& m = mixtures[c * br.size() + c2];
      out.push_back(ChannelBranch{br[c].weight * br[c2].weight, ProductState(m.states[0]),
                                  ProductState(m.states[1]), ProductState::tensor(br[c].mean, br[c2].mean),
                                  m.root_fidelity});
    }
  }
  if (w.is_diagonal()) return classical_reduction(out);
  return BinaryCQChannel::from_branches(std::move(out));
}

BinaryCQChannel build_plus(const BinaryCQChannel& w, const std::vector<Mixture>& mixtures) {
  const auto br = w.branches();
  std::vector<ChannelBranch> out;
  out.reserve(2 * mixtures.size());
  for (std::size_t c = 0; c < br.size(); ++c) {
    for (std::size_t c2 = 0; c2 < br.size(); ++c2) {
      const auto& m = mixtures[c * br.size() + c2];
      for (int u1 = 0; u1 < 2; ++u1) {
        const ProductState& s_u1 = u1 == 0 ? br[c].sigma0 : br[c].sigma1;
        const ProductState& s_not = u1 == 0 ? br[c].sigma1 : br[c].sigma0;
        out.push_back(ChannelBranch{0.5 * br[c].weight * br[c2].weight,
                                    ProductState::tensor(s_u1, br[c2].sigma0),
                                    ProductState::tensor(s_not, br[c2].sigma1), ProductState(m.states[u1])});
      }
    }
  }
  if (w.is_diagonal()) return classical_reduction(out);
  return BinaryCQChannel::from_branches(canonical_merge(std::move(out)));
}

}  // namespace

Budgeted<BinaryCQChannel> transform_minus(const BinaryCQChannel& w, const Budget& budget) {
  const std::size_t b = w.branch_count();
  if (auto e = check_budget(w, b * b, budget)) return *e;
  return build_minus(w, minus_mixtures(w));
}

Budgeted<BinaryCQChannel> transform_plus(const BinaryCQChannel& w, const Budget& budget) {
  const std::size_t b = w.branch_count();
  if (auto e = check_budget(w, 2 * b * b, budget)) return *e;
  return build_plus(w, minus_mixtures(w));
}

Budgeted<TransformPair> transform_pair(const BinaryCQChannel& w, const Budget& budget) {
  const std::size_t b = w.branch_count();
  if (auto e = check_budget(w, 2 * b * b, budget)) return *e;
  const auto mixtures = minus_mixtures(w);
  return TransformPair{build_minus(w, mixtures), build_plus(w, mixtures)};
}

std::vector<int> split_expansion(unsigned n, std::size_t i) {
  if (n >= 63 || i < 1 || i > (std::size_t{1} << n)) {
    throw std::invalid_argument("split index outside 1..2^n");
  }
  std::vector<int> bits(n);
  for (unsigned k = 0; k < n; ++k) bits[k] = static_cast<int>(((i - 1) >> (n - 1 - k)) & 1);
  return bits;
}

Budgeted<BinaryCQChannel> split_channel(const BinaryCQChannel& base, unsigned n, std::size_t i,
                                        const Budget& budget) {
  BinaryCQChannel w = base;
  for (int b : split_expansion(n, i)) {
    auto next = b == 0 ? transform_minus(w, budget) : transform_plus(w, budget);
    if (auto* e = std::get_if<BudgetExceeded>(&next)) return *e;
    w = std::get<BinaryCQChannel>(std::move(next));
  }
  return w;
}

namespace {

// Depth-first over the synthesis tree so only one root-to-leaf path of
// channels is alive at a time.
std::optional<BudgetExceeded> walk(const BinaryCQChannel& w, unsigned level, unsigned n, std::size_t index,
                                   const Budget& budget, std::vector<std::vector<ChannelParams>>& levels) {
  levels[level][index] = channel_params(w, budget);
  if (level == n) return std::nullopt;
  auto pair = transform_pair(w, budget);
  if (auto* e = std::get_if<BudgetExceeded>(&pair)) return *e;
  auto& [minus, plus] = std::get<TransformPair>(pair);
  if (auto e = walk(minus, level + 1, n, 2 * index, budget, levels)) return e;
  return walk(plus, level + 1, n, 2 * index + 1, budget, levels);
}

}  // namespace

Budgeted<std::vector<std::vector<ChannelParams>>> synthesis_tree(const BinaryCQChannel& base, unsigned n,
                                                                 const Budget& budget) {
  if (n > 30) return BudgetExceeded{"level above 30"};
  std::vector<std::vector<ChannelParams>> levels(n + 1);
  for (unsigned k = 0; k <= n; ++k) levels[k].resize(std::size_t{1} << k);
  if (auto e = walk(real_frame(base), 0, n, 0, budget, levels)) return *e;
  return levels;
}

Budgeted<std::vector<ChannelParams>> split_params(const BinaryCQChannel& base, unsigned n,
                                                  const Budget& budget) {
  auto tree = synthesis_tree(base, n, budget);
  if (auto* e = std::get_if<BudgetExceeded>(&tree)) return *e;
  return std::move(std::get<std::vector<std::vector<ChannelParams>>>(tree).back());
}

}  // namespace cqpolar
