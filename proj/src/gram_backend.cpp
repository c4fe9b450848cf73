#include "cqpolar/gram_backend.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <sstream>

#include "cqpolar/polar_transform.hpp"

namespace cqpolar {

void walsh_hadamard(std::vector<double>& values) {
  const std::size_t len = values.size();
  log2_exact(len);
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t block = 0; block < len; block += 2 * h) {
      for (std::size_t k = block; k < block + h; ++k) {
        const double a = values[k];
        const double b = values[k + h];
        values[k] = a + b;
        values[k + h] = a - b;
      }
    }
  }
}

namespace {

ChannelParams params_for_index(double overlap, unsigned n, std::size_t i) {
  const std::size_t len = std::size_t{1} << n;
  const std::size_t m = len - i;
  const std::size_t components = std::size_t{1} << m;
  std::vector<double> powers(len + 1);
  for (std::size_t w = 0; w <= len; ++w) powers[w] = std::pow(overlap, static_cast<double>(w));

  // g[b][h] = overlap^weight((0..0, b, h) G_N)
  std::vector<double> g0(components), g1(components);
  BitVector u(len);
  for (std::size_t h = 0; h < components; ++h) {
    for (int b = 0; b < 2; ++b) {
      std::fill(u.begin(), u.end(), 0);
      u[i - 1] = static_cast<std::uint8_t>(b);
      for (std::size_t k = 0; k < m; ++k) u[i + k] = static_cast<std::uint8_t>((h >> (m - 1 - k)) & 1);
      encode_in_place(u);
      const auto weight = static_cast<std::size_t>(std::count(u.begin(), u.end(), 1));
      (b == 0 ? g0 : g1)[h] = powers[weight];
    }
  }
  walsh_hadamard(g0);
  walsh_hadamard(g1);

  const double scale = 1.0 / static_cast<double>(components);
  std::vector<double> state(components), mean(2 * components);
  double root_fidelity = 0.0;
  for (std::size_t k = 0; k < components; ++k) {
    state[k] = std::max(g0[k] * scale, 0.0);
    mean[2 * k] = std::max((g0[k] + g1[k]) * scale / 2.0, 0.0);
    mean[2 * k + 1] = std::max((g0[k] - g1[k]) * scale / 2.0, 0.0);
    root_fidelity += std::abs(g1[k]) * scale;
  }
  ChannelParams p;
  p.holevo = std::clamp(shannon_entropy(mean) - shannon_entropy(state), 0.0, 1.0);
  p.root_fidelity = std::min(root_fidelity, 1.0);
  p.fidelity = p.root_fidelity * p.root_fidelity;
  return p;
}

std::optional<BudgetExceeded> check_index(unsigned n, std::size_t i, const Budget& budget) {
  const std::size_t len = std::size_t{1} << n;
  if (i < 1 || i > len) throw std::invalid_argument("gram_split_params: index outside 1..N");
  const std::size_t m = len - i;
  if (m >= 63 || (std::size_t{1} << m) > budget.max_gram_dim) {
    std::ostringstream os;
    os << "gram components 2^" << m << " > " << budget.max_gram_dim;
    return BudgetExceeded{os.str()};
  }
  return std::nullopt;
}

}  // namespace

Budgeted<std::vector<ChannelParams>> gram_split_params(double overlap, unsigned n,
                                                       const std::vector<std::size_t>& indices,
                                                       const Budget& budget) {
  if (!(overlap >= -1.0 && overlap <= 1.0)) throw std::invalid_argument("gram_split_params: overlap outside [-1,1]");
  if (n > 30) return BudgetExceeded{"level above 30"};
  for (std::size_t i : indices) {
    if (auto e = check_index(n, i, budget)) return *e;
  }
  std::vector<ChannelParams> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(params_for_index(overlap, n, i));
  return out;
}

std::vector<std::optional<ChannelParams>> gram_split_params_feasible(double overlap, unsigned n,
                                                                     const Budget& budget) {
  if (!(overlap >= -1.0 && overlap <= 1.0)) throw std::invalid_argument("gram_split_params: overlap outside [-1,1]");
  if (n > 30) throw std::invalid_argument("gram_split_params: level above 30");
  const std::size_t len = std::size_t{1} << n;
  std::vector<std::optional<ChannelParams>> out(len);
  for (std::size_t i = 1; i <= len; ++i) {
    if (!check_index(n, i, budget)) out[i - 1] = params_for_index(overlap, n, i);
  }
  return out;
}

}  // namespace cqpolar
