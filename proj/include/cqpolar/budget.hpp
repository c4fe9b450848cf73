#pragma once

// Resource caps for exact synthesis and exact decoding. Exceeding a cap is not
// an error: operations return BudgetExceeded so callers can fall back to
// bound propagation.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace cqpolar {

struct Budget {
  // Quantum dimension of any synthesized state (diagonal storage included).
  std::size_t max_quantum_dim = 65536;
  // Branches of a synthesized channel, checked before merging.
  std::size_t max_branches = 4096;
  // Largest non-diagonal state that is ever materialized as a dense matrix.
  std::size_t max_dense_dim = 1024;
  // Components 2^(N-i) of one averaged state in the pure-state backend.
  std::size_t max_gram_dim = std::size_t{1} << 20;

  // Parses "dim=65536,branches=4096,dense=1024,gram=1048576"; unknown keys and
  // malformed values throw std::invalid_argument. Missing keys keep defaults.
  static Budget parse(std::string_view text);
  // Defaults overridden by the CQPOLAR_BUDGET environment variable when set.
  static Budget from_environment();

  std::string to_string() const;
};

struct BudgetExceeded {
  std::string what;  // which cap, with requested and allowed sizes
};

template <typename T>
using Budgeted = std::variant<T, BudgetExceeded>;

template <typename T>
bool within_budget(const Budgeted<T>& r) {
  return std::holds_alternative<T>(r);
}

// Unwraps or throws std::runtime_error carrying the budget message.
template <typename T>
T take(Budgeted<T> r) {
  if (auto* e = std::get_if<BudgetExceeded>(&r)) {
    throw std::runtime_error("budget exceeded: " + e->what);
  }
  return std::get<T>(std::move(r));
}

}  // namespace cqpolar
