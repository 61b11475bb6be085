#pragma once

// Local height integrals (closed forms and brute-force oracles), Euler
// products, the archimedean factor and the leading constant.

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "campana/local_factor.hpp"
#include "campana/orbifold.hpp"

namespace campana {

/// Brute-force count of X(F_p) by exact boundary stratum.
std::map<StratumKey, BigInt> stratum_counts(const OrbifoldModel& model, std::uint64_t p);

/// Good-reduction local density sum_B #D°_B/p^{n-#B} prod_{b in B} (1-1/p) t^{m_b}/(1-t)
/// with t = p^{-(lambda s - kappa + 1)}. Terms with an epsilon = 1 divisor vanish.
LocalFactor local_density_closed(const OrbifoldModel& model, std::uint64_t p);

/// Coefficients c_0..c_N of the same integral, computed by enumerating the
/// residue classes of each valuation shell of the chart and evaluating the
/// Campana predicate and local height on a representative point.
std::vector<Rational> local_density_oracle(const OrbifoldModel& model, std::uint64_t p, std::size_t N);

/// local density times prod_a (1 - t^{m_a}) (no factor for m = infinity).
/// Primes in S use the untwisted m = 1 local density.
LocalFactor regularized_local_factor(const OrbifoldModel& model, std::uint64_t p,
                                     const PlaceSet& S = {});

/// Exponent gap delta' with regularized factor = 1 + O(p^{-(1+delta')}) at s,
/// or +infinity when every factor is identically 1. Throws
/// std::domain_error("divergent") outside the convergence window.
double regularized_gap(const OrbifoldModel& model, double s);

struct DensityReport {
  std::string model;
  Multiplicity m;
  double s = 0;
  std::uint64_t prime_bound = 0;
  double value = 1;
  double tail_bound = 0;
  std::vector<std::pair<std::uint64_t, double>> factors;

  nlohmann::json to_json() const;
};

/// prod_{p <= P_max} regularized factor at t_p = p^{-(lambda s - kappa + 1)}.
DensityReport euler_product(const OrbifoldModel& model, double s, std::uint64_t prime_bound,
                            const PlaceSet& S = {}, unsigned threads = 0);

/// int_{G(R)} max(1, |x|_inf)^{-sigma} dx over the chart; closed form
/// 2^n + n 2^n/(sigma - n). Throws std::domain_error("divergent archimedean integral")
/// for sigma <= n.
double archimedean_density(const OrbifoldModel& model, double sigma);

struct QuadratureResult {
  double value = 0;
  double error = 0;
};

/// Same integral by nested adaptive Gauss-Kronrod quadrature.
QuadratureResult archimedean_density_quadrature(const OrbifoldModel& model, double sigma);

struct LeadingConstant {
  Invariants invariants;
  unsigned b = 1;              // b_bar, or b' in the dlt case
  double prefactor = 1;        // prod 1/(m lambda) over A_eps
  double archimedean = 0;
  double euler_product = 1;
  double c_bar = 0;
  double tail_bound = 0;       // relative bound on c_bar from the omitted primes
  double tauberian = 0;        // c_bar / (a (b-1)!)
  std::uint64_t prime_bound = 0;

  nlohmann::json to_json() const;
};

/// c_bar for the built-in single-divisor models: klt case uses
/// 1/(m lambda) * archimedean(lambda a) * euler product at s = a; the dlt case
/// (m = infinity, L = -(K + D)) uses 2^n prod_{p in S} (1 - p^-n)/(n log p).
LeadingConstant leading_constant(const OrbifoldModel& model, const PlaceSet& S, std::uint64_t prime_bound,
                                 unsigned threads = 0);

/// Twisted local integral of H_p^{-1} delta_eps psi_p(sum a_i x_i) over the
/// chart, one coefficient a_i per chart coordinate (zero entries allowed).
/// Closed form in t: with j = min_i v_p(a_i) over nonzero a_i,
/// 1 + sum_{1<=k<=j} delta(k)(1-p^-n) t^k - delta(j+1) p^-n t^{j+1}; zero if j < 0.
LocalFactor twisted_local_density(const OrbifoldModel& model, std::uint64_t p, std::span<const Rational> a);

/// Oracle: exact character sums over the boxes p^-k Z_p^n (k <= N) reduced in
/// the cyclotomic field; shell sums are differences of consecutive boxes.
std::vector<Rational> twisted_local_density_oracle(const OrbifoldModel& model, std::uint64_t p,
                                                   std::span<const Rational> a, std::size_t N);

/// P3 model, character psi(a1 x + a2 y) (no z dependence).
LocalFactor twisted_heisenberg_density(const OrbifoldModel& model, std::uint64_t p, const Rational& a1,
                                       const Rational& a2);

/// P2 unipotent model in chart (y, z), character psi(a z); truncated to depth N
/// via the oracle when `use_oracle` is set, otherwise the closed form series.
std::vector<Rational> twisted_unipotent_density(const OrbifoldModel& model, std::uint64_t p, const Rational& a,
                                                std::size_t N, bool use_oracle = false);

/// int_{p^-k Z_p} exp(2 pi i {c x}_p) dx, evaluated as an exact sum over
/// residues; throws ArithmeticError if the reduced cyclotomic sum is not rational.
Rational box_character_integral(const Rational& c, std::uint64_t p, unsigned k);

}  // namespace campana
