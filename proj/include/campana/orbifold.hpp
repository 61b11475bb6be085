#pragma once

// Campana orbifold models, intersection multiplicities, the Campana point
// predicate and the log-Manin invariants a, b, b'.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "campana/exact_arith.hpp"

namespace campana {

using DivisorId = std::string;

/// Bitmask over the divisor indices of a model; bit i set <=> divisor i in B.
using StratumKey = std::uint32_t;

/// A place of Q: 0 is the archimedean place, anything else a prime.
using Place = std::uint64_t;
inline constexpr Place kArchimedean = 0;

class BoundaryPointError : public std::domain_error {
 public:
  BoundaryPointError() : std::domain_error("point lies in boundary") {}
};

struct BoundaryDivisor {
  DivisorId id;
  int kappa = 2;             // coefficient in -K_X = sum kappa_a D_a
  Rational lambda{1};        // coefficient in L = sum lambda_a D_a
  Multiplicity m{1};         // nullopt encodes m = infinity (epsilon = 1)
  int linear_form_pole_order = 1;  // d_a(f) for the degree-one forms f_a

  /// epsilon = 1 - 1/m, or 1 for m = infinity.
  Rational epsilon() const;
  bool is_klt() const { return m.has_value(); }
};

struct OrbifoldModel {
  std::string name;
  std::size_t ambient_dim = 0;  // n: X has dimension n, points have n+1 coordinates
  std::vector<BoundaryDivisor> divisors;
  std::set<std::uint64_t> bad_primes;

  /// Closed-form count of the stratum D°_{p,B}(F_p).
  std::function<BigInt(StratumKey, std::uint64_t)> stratum_enumerator;
  /// Visits every F_p-point of X once (normalized coordinates).
  std::function<void(std::uint64_t, const std::function<void(std::span<const std::uint64_t>)>&)>
      for_each_fp_point;
  /// Set of divisors containing an F_p-point.
  std::function<StratumKey(std::span<const std::uint64_t>, std::uint64_t)> fp_classifier;
  /// Integer value of the section f_a on primitive coordinates; zero iff the
  /// point lies on D_a. Its p-adic valuation is n_p(D_a, P).
  std::function<BigInt(const PrimitivePoint&, std::size_t)> boundary_section;
  /// Open embedding of the group: chart coordinates -> X.
  std::function<PrimitivePoint(std::span<const Rational>)> chart;
  /// Whether the intersection of the divisors in B has a Q_v-point.
  std::function<bool(StratumKey, Place)> has_local_point;

  /// For compactifications Y of a subgroup inside a larger model: the
  /// ambient model name, the ambient kappa of each divisor and the inclusion
  /// Y -> X on points.
  struct Ambient {
    std::string model_name;
    std::vector<int> kappa;
    std::function<PrimitivePoint(const PrimitivePoint&)> include;
  };
  std::optional<Ambient> ambient;

  std::size_t divisor_index(const DivisorId& id) const;
  std::size_t chart_dim() const { return ambient_dim; }
  StratumKey full_key() const { return (StratumKey{1} << divisors.size()) - 1; }

  /// n_p(D_a, P) as the p-adic valuation of the boundary section.
  unsigned multiplicity_rule(const PrimitivePoint& P, std::size_t divisor, std::uint64_t p) const;
};

/// Names accepted by builtin_model.
std::vector<std::string> builtin_model_names();

/// Built-in models "p3-heisenberg", "p2-unipotent", "p1-vector", each with a
/// single hyperplane boundary {first coordinate = 0}. lambda defaults to 1,
/// except for m = infinity where it defaults to kappa - 1 (L = -(K+D)).
OrbifoldModel builtin_model(const std::string& name, const Multiplicity& m,
                            std::optional<Rational> lambda = std::nullopt);

/// n_p(D_a, P). Throws BoundaryPointError when P lies on D_a and
/// std::invalid_argument for bad primes.
unsigned intersection_multiplicity(const OrbifoldModel& model, const PrimitivePoint& P,
                                   const DivisorId& divisor, std::uint64_t p);

/// Campana O_S-point predicate.
bool is_campana(const OrbifoldModel& model, const PrimitivePoint& P, const PlaceSet& S);

struct Invariants {
  Rational a_bar;
  unsigned b_bar = 0;
  std::optional<unsigned> b_prime;
  std::vector<DivisorId> A_eps;
};

/// a = max (kappa - epsilon)/lambda, b = #argmax; b' in the dlt case with
/// L = -(K + D_eps).
Invariants predict_invariants(const OrbifoldModel& model, const PlaceSet& S);

/// Brute-force check of the stratum partition: sum over B of the closed-form
/// counts equals #X(F_p).
BigInt count_fp_points(const OrbifoldModel& model, std::uint64_t p);

}  // namespace campana
