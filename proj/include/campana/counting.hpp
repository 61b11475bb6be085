#pragma once

// Counting Campana points of bounded height: brute-force enumeration, a
// Mobius-accelerated counter, height-zeta partial sums and asymptotic fits.

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "campana/densities.hpp"
#include "campana/heights.hpp"
#include "campana/orbifold.hpp"

namespace campana {

/// Default brute-force cap on the number of enumerated coordinate tuples.
inline constexpr std::uint64_t kDefaultEnumerationCap = 200'000'000;

/// Largest B with B^lambda <= T, i.e. the coordinate bound for H_L <= T on the
/// P^n built-ins (H_L = max|x_i|^lambda on primitive coordinates). 0 if T < 1.
std::uint64_t effective_height_bound(double T, const Rational& lambda);

using PointVisitor = std::function<void(const PrimitivePoint&, const Rational& height)>;

/// Exact number of Campana S-integral points of G(Q) with H_L(P) <= T, by
/// enumerating primitive tuples (a, x_1..x_n), a > 0, max|.| <= B. Throws
/// std::length_error past `cap` tuples.
std::uint64_t enumerate_campana(const OrbifoldModel& model, double T, const PlaceSet& S,
                                std::uint64_t cap = kDefaultEnumerationCap, const PointVisitor& visit = {});

/// One enumeration pass shared by several (model, S) configurations with the
/// same chart and L: result[c][h] = number of points of configuration c whose
/// exact height is h, for integer heights h <= T (index 0 unused). Requires
/// integral lambda.
std::vector<std::vector<std::uint64_t>> enumerate_campana_profile(
    const std::vector<std::pair<OrbifoldModel, PlaceSet>>& configs, double T,
    std::uint64_t cap = kDefaultEnumerationCap, unsigned threads = 0);

/// N(T) = sum_{a m-full, a <= B} sum_{e | rad a} mu(e) (2 floor(B/e) + 1)^n.
BigInt count_fast(const OrbifoldModel& model, double T, const PlaceSet& S, unsigned threads = 0);

/// sum over Campana points with H <= T of H^-s.
double partial_zeta(const OrbifoldModel& model, double s, double T, const PlaceSet& S);

struct FitResult {
  double c_hat = 0;
  double residual = 0;  // max |N / (c_hat x) - 1|
};

/// Least squares N ~ c x with x = T^a (log T)^{b-1}.
FitResult fit_leading_constant(const std::vector<std::pair<double, double>>& pairs, double a_bar, unsigned b_bar);

/// Least-squares slope of log N against log T.
double loglog_slope(const std::vector<std::pair<double, double>>& pairs);

struct CountRow {
  double T = 0;
  BigInt N;
  double predicted = 0;  // tauberian x(T)
  double fitted = 0;     // c_hat x(T)
  double rel_err = 0;    // N / predicted - 1
  std::optional<double> seconds;
};

struct CountReport {
  std::string model;
  Multiplicity m;
  PlaceSet S;
  Rational lambda;
  Rational a_bar;
  unsigned b = 1;
  bool dlt = false;
  double c_bar = 0;
  double c_bar_tail = 0;
  double tauberian = 0;
  double c_hat = 0;
  double fit_residual = 0;
  double slope = 0;
  double rel_err = 0;  // c_hat / tauberian - 1
  std::vector<CountRow> rows;

  nlohmann::json to_json() const;
  /// Header "T,N,predicted,fitted,rel_err" followed by one line per T.
  std::string to_csv() const;
};

struct VerifyOptions {
  std::uint64_t prime_bound = 100'000;
  unsigned threads = 0;
  bool timings = false;
};

/// Predicted invariants and constant, fast counts over the grid and the fit.
CountReport verify_asymptotic(const OrbifoldModel& model, const PlaceSet& S, const std::vector<double>& grid,
                              const VerifyOptions& options = {});

}  // namespace campana
