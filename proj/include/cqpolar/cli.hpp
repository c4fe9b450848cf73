#pragma once

// Subcommands: polarize, construct, decode, verify, bounds-vs-exact.
// Returns the process exit status; output goes to the given streams or to
// the --out path.

#include <iosfwd>
#include <string>
#include <vector>

#include "cqpolar/bounds.hpp"

namespace cqpolar {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "index,f_lo,f_hi,holevo_lo,holevo_hi"; exact values fill both ends when
// present, otherwise Holevo ends come from the fidelity bounds.
std::string polarize_csv(const IntervalSet& set);

struct PolarizationSummary {
  double delta = 0.0;
  double good_fraction = 0.0;  // holevo_lo > 1 - delta
  double bad_fraction = 0.0;   // holevo_hi < delta
};

std::vector<PolarizationSummary> polarization_summary(const IntervalSet& set, const std::vector<double>& deltas);

}  // namespace cqpolar
