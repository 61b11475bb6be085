#pragma once

// Plain-text `key = value` run configuration shared by the CLI subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "campana/exact_arith.hpp"

namespace campana {

struct RunConfig {
  std::string model = "p3-heisenberg";
  Multiplicity m{1};
  PlaceSet S;
  std::optional<Rational> lambda;
  std::vector<double> T;
  std::uint64_t prime_bound = 100'000;
  std::vector<double> s;
  std::string format = "json";
  std::optional<unsigned> threads;
  std::string output;
  std::optional<std::uint64_t> prime;
  std::vector<Multiplicity> ms;
  std::optional<double> slope_tol;
  std::optional<double> const_tol;
  std::string method = "fast";
  unsigned depth = 12;

  /// Parses `key = value` lines; '#' starts a comment. Unknown keys and
  /// malformed values throw std::invalid_argument.
  static RunConfig parse(const std::string& text);
  /// Applies one key/value pair (same validation as parse).
  void set(const std::string& key, const std::string& value);
  /// Inverse of parse: parse(serialize()) == *this.
  std::string serialize() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Comma-separated number list ("100,141,2e3").
std::vector<double> parse_number_list(const std::string& text);
/// Shortest decimal that reads back to the same double.
std::string format_number(double x);

}  // namespace campana
