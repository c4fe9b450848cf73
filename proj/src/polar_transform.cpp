#include "cqpolar/polar_transform.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <json.hpp>

namespace cqpolar {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

unsigned log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("length is not a power of two");
  return static_cast<unsigned>(std::countr_zero(n));
}

std::vector<std::size_t> bit_reversal_permutation(std::size_t n_codeword) {
  const unsigned n = log2_exact(n_codeword);
  std::vector<std::size_t> perm(n_codeword, 0);
  for (std::size_t i = 1; i < n_codeword; ++i) {
    // reverse(i) = reverse(i >> 1) >> 1 with the low bit moved to the top
    perm[i] = (perm[i >> 1] >> 1) | ((i & 1) << (n - 1));
  }
  return perm;
}

void encode_in_place(std::span<std::uint8_t> bits) {
  const std::size_t len = bits.size();
  log2_exact(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::size_t r = 0;
    for (std::size_t x = i, m = len >> 1; m != 0; x >>= 1, m >>= 1) r = (r << 1) | (x & 1);
    if (i < r) std::swap(bits[i], bits[r]);
  }
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t block = 0; block < len; block += 2 * h) {
      std::uint8_t* lo = bits.data() + block;
      const std::uint8_t* hi = lo + h;
      for (std::size_t k = 0; k < h; ++k) lo[k] ^= hi[k];
    }
  }
}

BitVector encode(const BitVector& u) {
  BitVector x = u;
  encode_in_place(x);
  return x;
}

BitMatrix generator_matrix(std::size_t n_codeword) {
  log2_exact(n_codeword);
  if (n_codeword > kMaxGeneratorSize) {
    throw std::invalid_argument("generator_matrix: N above the materialization cap of 4096");
  }
  BitMatrix g(n_codeword, BitVector(n_codeword, 0));
  for (std::size_t i = 0; i < n_codeword; ++i) {
    g[i][i] = 1;
    encode_in_place(g[i]);
  }
  return g;
}

BitVector gf2_multiply(const BitVector& u, const BitMatrix& g) {
  if (u.size() != g.size()) throw std::invalid_argument("gf2_multiply: shape mismatch");
  const std::size_t cols = g.empty() ? 0 : g.front().size();
  BitVector out(cols, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] ^= g[i][j];
  }
  return out;
}

CodeSpec::CodeSpec(unsigned n, std::vector<std::size_t> info_set, BitVector frozen_values)
    : n_(n), info_set_(std::move(info_set)), frozen_(std::move(frozen_values)) {
  if (n_ > 30) throw std::invalid_argument("CodeSpec: n above 30");
  const std::size_t len = block_length();
  if (frozen_.size() != len) throw std::invalid_argument("CodeSpec: frozen vector length differs from N");
  is_info_.assign(len, 0);
  for (std::size_t i : info_set_) {
    if (i >= len) throw std::invalid_argument("CodeSpec: information index out of range");
    if (is_info_[i]) throw std::invalid_argument("CodeSpec: repeated information index");
    is_info_[i] = 1;
  }
  std::sort(info_set_.begin(), info_set_.end());
  for (std::size_t i = 0; i < len; ++i) {
    if (frozen_[i] > 1) throw std::invalid_argument("CodeSpec: frozen values must be bits");
    if (is_info_[i] && frozen_[i]) throw std::invalid_argument("CodeSpec: frozen value set at an information index");
  }
}

CodeSpec::CodeSpec(unsigned n, std::vector<std::size_t> info_set)
    : CodeSpec(n, std::move(info_set), BitVector(std::size_t{1} << std::min(n, 30u), 0)) {}

std::vector<std::size_t> CodeSpec::frozen_set() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < block_length(); ++i) {
    if (!is_info_[i]) out.push_back(i);
  }
  return out;
}

CodeSpec CodeSpec::with_frozen_values(BitVector frozen_values) const {
  return CodeSpec(n_, info_set_, std::move(frozen_values));
}

BitVector CodeSpec::assemble(const BitVector& info_bits) const {
  if (info_bits.size() != info_set_.size()) {
    throw std::invalid_argument("CodeSpec: expected K information bits");
  }
  BitVector u = frozen_;
  for (std::size_t k = 0; k < info_set_.size(); ++k) u[info_set_[k]] = info_bits[k] & 1;
  return u;
}

BitVector CodeSpec::extract(const BitVector& u) const {
  BitVector out(info_set_.size());
  for (std::size_t k = 0; k < info_set_.size(); ++k) out[k] = u[info_set_[k]];
  return out;
}

std::string CodeSpec::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "cqpolar.codespec/1";
  j["n"] = n_;
  j["K"] = info_set_.size();
  auto info = nlohmann::ordered_json::array();
  for (std::size_t i : info_set_) info.push_back(i + 1);
  j["info_set"] = info;
  auto frozen = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < block_length(); ++i) {
    if (!is_info_[i]) frozen[std::to_string(i + 1)] = frozen_[i];
  }
  j["frozen_bits"] = frozen;
  return j.dump(2);
}

CodeSpec CodeSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("CodeSpec: invalid JSON: ") + e.what());
  }
  try {
    const unsigned n = j.at("n").get<unsigned>();
    if (n > 30) throw std::invalid_argument("CodeSpec: n above 30");
    const std::size_t len = std::size_t{1} << n;
    std::vector<std::size_t> info;
    for (const auto& v : j.at("info_set")) {
      const std::size_t one_based = v.get<std::size_t>();
      if (one_based == 0 || one_based > len) throw std::invalid_argument("CodeSpec: info index out of 1..N");
      info.push_back(one_based - 1);
    }
    if (j.contains("K") && j["K"].get<std::size_t>() != info.size()) {
      throw std::invalid_argument("CodeSpec: K differs from the size of info_set");
    }
    BitVector frozen(len, 0);
    if (j.contains("frozen_bits")) {
      for (const auto& [key, value] : j["frozen_bits"].items()) {
        const std::size_t one_based = std::stoul(key);
        if (one_based == 0 || one_based > len) throw std::invalid_argument("CodeSpec: frozen index out of 1..N");
        const int bit = value.get<int>();
        if (bit != 0 && bit != 1) throw std::invalid_argument("CodeSpec: frozen value must be 0 or 1");
        frozen[one_based - 1] = static_cast<std::uint8_t>(bit);
      }
    }
    return CodeSpec(n, std::move(info), std::move(frozen));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("CodeSpec: ") + e.what());
  }
}

BitVector coset_encode(const CodeSpec& spec, const BitVector& info_bits) {
  return encode(spec.assemble(info_bits));
}

}  // namespace cqpolar
