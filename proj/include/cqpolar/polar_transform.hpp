#pragma once

// x = u G_N with G_N = B_N F^{(x)n}: bit-reversal on the input side, then the
// Kronecker power of F = [[1,0],[1,1]] applied as an in-place butterfly.
// Indices are 0-based here; CodeSpec JSON uses 1-based indices.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cqpolar {

using BitVector = std::vector<std::uint8_t>;
using BitMatrix = std::vector<BitVector>;

bool is_power_of_two(std::size_t n);
// log2 of a power of two; throws std::invalid_argument otherwise.
unsigned log2_exact(std::size_t n);

// In place; length must be a power of two.
void encode_in_place(std::span<std::uint8_t> bits);
BitVector encode(const BitVector& u);

// Index with binary expansion b1..bn maps to bn..b1.
std::vector<std::size_t> bit_reversal_permutation(std::size_t n_codeword);

inline constexpr std::size_t kMaxGeneratorSize = 4096;
// Row i is encode(e_i). Throws above kMaxGeneratorSize.
BitMatrix generator_matrix(std::size_t n_codeword);
// Row vector times matrix over GF(2).
BitVector gf2_multiply(const BitVector& u, const BitMatrix& g);

class CodeSpec {
 public:
  // info_set: distinct 0-based indices. frozen_values has length N; entries
  // at information positions must be 0.
  CodeSpec(unsigned n, std::vector<std::size_t> info_set, BitVector frozen_values);
  // All frozen bits zero.
  CodeSpec(unsigned n, std::vector<std::size_t> info_set);

  unsigned n() const { return n_; }
  std::size_t block_length() const { return std::size_t{1} << n_; }
  std::size_t info_count() const { return info_set_.size(); }
  // Sorted ascending.
  const std::vector<std::size_t>& info_set() const { return info_set_; }
  std::vector<std::size_t> frozen_set() const;
  bool is_info(std::size_t i) const { return is_info_[i] != 0; }
  const BitVector& frozen_values() const { return frozen_; }

  CodeSpec with_frozen_values(BitVector frozen_values) const;

  // Full u^N: info bits at A (ascending order), frozen values elsewhere.
  BitVector assemble(const BitVector& info_bits) const;
  // Info bits read back from a full u^N.
  BitVector extract(const BitVector& u) const;

  std::string to_json() const;
  static CodeSpec from_json(const std::string& text);

  friend bool operator==(const CodeSpec& a, const CodeSpec& b) {
    return a.n_ == b.n_ && a.info_set_ == b.info_set_ && a.frozen_ == b.frozen_;
  }

 private:
  unsigned n_;
  std::vector<std::size_t> info_set_;
  BitVector is_info_;
  BitVector frozen_;
};

BitVector coset_encode(const CodeSpec& spec, const BitVector& info_bits);

}  // namespace cqpolar
