#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ncsir/integrate.hpp"

namespace ncsir {

struct VerifyOptions {
  bool quick = false;                   // closed-form checks and the strong-order probe only
  Scheme scheme = Scheme::Milstein;     // EulerMaruyama makes the strong-order check fail
  std::uint64_t seed = 20240601;
  bool gamma_as_printed = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string measured;  // human-readable measured value(s)
  std::string criterion;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opts);

/// Fixed-width pass/fail table; returns true iff every check passed.
bool print_verification(std::ostream& os, const std::vector<CheckResult>& results);

/// Euler global-error constant for the total population: every preset
/// trajectory keeps |N(t) - exact N(t)| <= kPopulationK * dt. Calibrated once
/// on the five presets (largest measured ratio 0.13, fig5) and frozen.
inline constexpr double kPopulationK = 0.25;

}  // namespace ncsir
