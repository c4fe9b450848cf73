#pragma once

// Invariant suites behind `cqpolar verify`. Each row reports the largest
// violation of one property on one channel (0 when it holds with slack).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cqpolar/budget.hpp"

namespace cqpolar {

struct VerifyRow {
  std::string property;
  std::string channel;
  unsigned n = 0;
  double max_violation = 0.0;
  bool pass = true;
};

struct VerifyOptions {
  // Empty: every name in verify_suite_names(). "decay" (rate-half sum of
  // sqrt F non-increasing for n = 4..20) is a finite-length trend rather than
  // an invariant and only runs when named.
  std::vector<std::string> suites;
  // Negative control: scales every plus-child sqrt F by 1.001 before the
  // fidelity checks, which must then fail.
  bool mutate_fidelity = false;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::size_t random_channels = 3;
  Budget budget{};
};

const std::vector<std::string>& verify_suite_names();

// Throws std::invalid_argument on an unknown suite name.
std::vector<VerifyRow> run_verify(const VerifyOptions& options);

std::string verify_table(const std::vector<VerifyRow>& rows);
// "# schema=cqpolar.verify/1" then property,channel,n,max_violation,pass.
std::string verify_csv(const std::vector<VerifyRow>& rows);

}  // namespace cqpolar
