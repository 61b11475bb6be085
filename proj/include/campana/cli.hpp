#pragma once

// Command-line front end: predict | count | densities | constant | verify | sweep.

#include <ostream>
#include <string>
#include <vector>

namespace campana::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTolerance = 3;

/// Runs one command line (without the program name). Reports go to `out` (or
/// the configured output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Acceptance defaults: slope within 0.1 (m = 1) or 0.15 (m >= 2) of a;
/// constant within 10% (m = 1), 20% (m >= 2) or 5% (epsilon = 1).
double default_slope_tolerance(bool dlt, unsigned m);
double default_constant_tolerance(bool dlt, unsigned m);

}  // namespace campana::cli
