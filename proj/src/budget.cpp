#include "cqpolar/budget.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace cqpolar {

Budget Budget::parse(std::string_view text) {
  Budget b;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("budget: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    std::size_t parsed = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size() || parsed == 0) {
      throw std::invalid_argument("budget: bad value for '" + std::string(key) + "'");
    }
    if (key == "dim") {
      b.max_quantum_dim = parsed;
    } else if (key == "branches") {
      b.max_branches = parsed;
    } else if (key == "dense") {
      b.max_dense_dim = parsed;
    } else if (key == "gram") {
      b.max_gram_dim = parsed;
    } else {
      throw std::invalid_argument("budget: unknown key '" + std::string(key) + "'");
    }
  }
  return b;
}

Budget Budget::from_environment() {
  const char* env = std::getenv("CQPOLAR_BUDGET");
  if (env == nullptr) return Budget{};
  return parse(env);
}

std::string Budget::to_string() const {
  std::ostringstream os;
  os << "dim=" << max_quantum_dim << ",branches=" << max_branches << ",dense=" << max_dense_dim
     << ",gram=" << max_gram_dim;
  return os.str();
}

}  // namespace cqpolar
