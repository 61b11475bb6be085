#include "campana/densities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "campana/heights.hpp"
#include "format.hpp"
#include "parallel.hpp"

namespace campana {

namespace mp = boost::multiprecision;

namespace {

Rational p_power(std::uint64_t p, int e) { return Rational(BigInt(p)).pow(e); }

void require_good(const OrbifoldModel& model, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (model.bad_primes.contains(p)) {
    throw std::invalid_argument("bad reduction at " + std::to_string(p) + ": no closed-form local factor");
  }
}

// All divisors must share kappa and lambda so that a single formal variable t
// describes the factor.
const BoundaryDivisor& common_divisor(const OrbifoldModel& model) {
  if (model.divisors.empty()) throw std::invalid_argument("model has no boundary divisors");
  const auto& D = model.divisors.front();
  for (const auto& E : model.divisors) {
    if (E.kappa != D.kappa || E.lambda != D.lambda) {
      throw std::invalid_argument("local factors need a common kappa and lambda across divisors");
    }
  }
  return D;
}

Substitution substitution_for(const OrbifoldModel& model, std::uint64_t p) {
  const auto& D = common_divisor(model);
  return Substitution{p, D.lambda, D.kappa - 1};
}

Polynomial one_minus_t_pow(std::size_t k) { return Polynomial(Rational(1)) - Polynomial::monomial(Rational(1), k); }

OrbifoldModel with_multiplicity_one(OrbifoldModel model) {
  for (auto& D : model.divisors) D.m = 1;
  return model;
}

// Representative point [p^k : u_1 : ... : u_n] of a residue class.
PrimitivePoint shell_point(std::uint64_t p, unsigned k, std::span<const std::uint64_t> u) {
  std::vector<BigInt> coords;
  coords.reserve(u.size() + 1);
  coords.push_back(mp::pow(BigInt(p), k));
  for (auto x : u) coords.emplace_back(x);
  return primitive_rep_integral(std::move(coords));
}

bool campana_at_shell(const OrbifoldModel& model, std::uint64_t p, unsigned k) {
  std::vector<std::uint64_t> u(model.chart_dim(), 0);
  u[0] = 1;
  return is_campana(model, shell_point(p, k, u), PlaceSet{});
}

}  // namespace

std::map<StratumKey, BigInt> stratum_counts(const OrbifoldModel& model, std::uint64_t p) {
  require_good(model, p);
  std::map<StratumKey, BigInt> counts;
  model.for_each_fp_point(p, [&](std::span<const std::uint64_t> pt) { counts[model.fp_classifier(pt, p)] += 1; });
  return counts;
}

LocalFactor local_density_closed(const OrbifoldModel& model, std::uint64_t p) {
  require_good(model, p);
  const auto r = model.divisors.size();
  const auto n = static_cast<int>(model.ambient_dim);
  LocalFactor f;
  f.substitution = substitution_for(model, p);
  const Polynomial one_minus_t = one_minus_t_pow(1);
  Polynomial common(Rational(1));
  for (std::size_t i = 0; i < r; ++i) common = common * one_minus_t;
  f.denominator = common;

  const Rational unit_loss = Rational(1) - p_power(p, -1);
  for (StratumKey B = 0; B <= model.full_key(); ++B) {
    const BigInt count = model.stratum_enumerator(B, p);
    if (count == 0) continue;
    const int size = std::popcount(B);
    Polynomial term(Rational(count) * p_power(p, size - n));
    bool vanishes = false;
    for (std::size_t i = 0; i < r; ++i) {
      if (!(B >> i & 1)) {
        term = term * one_minus_t;
        continue;
      }
      const auto& m = model.divisors[i].m;
      if (!m) {
        vanishes = true;
        break;
      }
      term = term * Polynomial::monomial(unit_loss, *m);
    }
    if (!vanishes) f.numerator += term;
  }
  return f.reduced();
}

std::vector<Rational> local_density_oracle(const OrbifoldModel& model, std::uint64_t p, std::size_t N) {
  require_good(model, p);
  if (N < 1) throw std::invalid_argument("oracle depth must be >= 1");
  const std::size_t n = model.chart_dim();
  const auto& D = common_divisor(model);
  constexpr std::uint64_t kClassCap = 4096;

  std::vector<Rational> coeffs(N + 1);
  for (unsigned k = 0; k <= N; ++k) {
    unsigned r = 0;
    std::uint64_t classes = 1;
    while (r < k) {
      std::uint64_t next = classes;
      for (std::size_t i = 0; i < n; ++i) next *= p;
      if (next > kClassCap && r >= 1) break;
      classes = next;
      ++r;
    }
    std::uint64_t modulus = 1;
    for (unsigned i = 0; i < r; ++i) modulus *= p;
    // each class u mod p^r of p^k x has measure p^{kn} p^{-rn}
    const Rational class_volume = p_power(p, static_cast<int>((static_cast<int>(k) - static_cast<int>(r)) * n));

    std::vector<std::uint64_t> u(n, 0);
    for (;;) {
      const PrimitivePoint P = shell_point(p, k, u);
      if (intersection_multiplicity(model, P, D.id, p) == k && is_campana(model, P, PlaceSet{})) {
        // ||f||_p = p^{-e}, integrand H_p^{-s} = t^e p^{-e(kappa-1)}
        const Rational norm = local_height(model, P, D.id, p);
        const int e = -padic_valuation(norm, p);
        if (e >= 0 && static_cast<std::size_t>(e) <= N) {
          coeffs[e] += class_volume * p_power(p, -e * (D.kappa - 1));
        }
      }
      std::size_t i = 0;
      while (i < n && u[i] + 1 >= modulus) u[i++] = 0;
      if (i == n) break;
      ++u[i];
    }
  }
  return coeffs;
}

LocalFactor regularized_local_factor(const OrbifoldModel& model, std::uint64_t p, const PlaceSet& S) {
  LocalFactor f = S.contains(p) ? local_density_closed(with_multiplicity_one(model), p)
                                : local_density_closed(model, p);
  Polynomial reg(Rational(1));
  for (const auto& D : model.divisors) {
    if (D.m) reg = reg * one_minus_t_pow(*D.m);
  }
  return f.times(reg);
}

double regularized_gap(const OrbifoldModel& model, double s) {
  const auto& D = common_divisor(model);
  const double w = D.lambda.to_double() * s - (D.kappa - 1);
  const double n = static_cast<double>(model.ambient_dim);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& E : model.divisors) {
    if (!E.m) continue;
    if (w <= 0) throw std::domain_error("divergent");
    const double m = *E.m;
    // 1 - p^-n t^m + (1 - p^-n)(t^{m+1} + ... + t^{2m-1})
    double lead = n + m * w;
    if (m >= 2) lead = std::min(lead, (m + 1) * w);
    if (lead <= 1) throw std::domain_error("divergent");
    gap = std::min(gap, lead - 1);
  }
  return gap;
}

nlohmann::json DensityReport::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["m"] = m ? nlohmann::json(*m) : nlohmann::json("infinity");
  j["s"] = fmt12(s);
  j["prime_bound"] = prime_bound;
  j["value"] = fmt12(value);
  j["tail_bound"] = std::isfinite(tail_bound) ? nlohmann::json(fmt12(tail_bound)) : nlohmann::json(nullptr);
  auto arr = nlohmann::json::array();
  for (const auto& [p, v] : factors) arr.push_back({p, fmt12(v)});
  j["factors"] = arr;
  return j;
}

DensityReport euler_product(const OrbifoldModel& model, double s, std::uint64_t prime_bound, const PlaceSet& S,
                            unsigned threads) {
  DensityReport rep;
  rep.model = model.name;
  rep.m = model.divisors.empty() ? Multiplicity{1} : model.divisors.front().m;
  rep.s = s;
  rep.prime_bound = prime_bound;
  const double gap = regularized_gap(model, s);
  const auto primes = prime_bound >= 2 ? primes_up_to(prime_bound) : std::vector<std::uint64_t>{};

  std::vector<double> values(primes.size());
  detail::parallel_for(primes.size(), threads, [&](std::size_t i) {
    const LocalFactor f = regularized_local_factor(model, primes[i], S);
    values[i] = f.at_s(s);
  });

  rep.factors.reserve(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    rep.value *= values[i];
    rep.factors.emplace_back(primes[i], values[i]);
  }

  if (!std::isfinite(gap)) {
    rep.tail_bound = 0;
  } else if (primes.empty()) {
    rep.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    // C fitted on the last decade (P/10, P] of computed factors
    const double P = static_cast<double>(prime_bound);
    const double lo = P >= 20 ? P / 10 : 0;
    double C = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const double p = static_cast<double>(primes[i]);
      if (p <= lo || S.contains(primes[i])) continue;
      C = std::max(C, std::abs(std::log(values[i])) * std::pow(p, 1 + gap));
    }
    // sum_{p > P} p^{-(1+d)} <= 1.26 P^{-d} / (d log P)
    const double logP = std::log(std::max(P, 2.0));
    rep.tail_bound = C * 1.26 * std::pow(P, -gap) / (gap * logP);
  }
  return rep;
}

double archimedean_density(const OrbifoldModel& model, double sigma) {
  const double n = static_cast<double>(model.chart_dim());
  if (!(sigma > n)) throw std::domain_error("divergent archimedean integral");
  const double box = std::pow(2.0, n);
  return box + n * box / (sigma - n);
}

QuadratureResult archimedean_density_quadrature(const OrbifoldModel& model, double sigma) {
  const std::size_t n = model.chart_dim();
  if (!(sigma > static_cast<double>(n))) throw std::domain_error("divergent archimedean integral");
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double tol = 1e-12;

  // F_0(M) = M^-sigma, F_d(M) = int_0^inf F_{d-1}(max(M, x)) dx
  //        = M F_{d-1}(M) + int_0^inf F_{d-1}(M e^u) M e^u du.
  // F_d is homogeneous of degree d - sigma, so F_d(M) = c_d M^{d - sigma}
  // and each level reduces to one integral at M = 1.
  double c = 1.0;
  QuadratureResult out;
  for (std::size_t d = 1; d <= n; ++d) {
    const double prev = c;
    const double deg = static_cast<double>(d - 1) - sigma;
    double err = 0;
    const double tail = Integrator::integrate(
        [&](double u) {
          const double v = prev * std::exp((deg + 1.0) * u);
          return std::isfinite(v) ? v : 0.0;
        },
        0.0, std::numeric_limits<double>::infinity(), 15, tol, &err);
    c = prev + tail;
    out.error = out.error * (c / prev) + err;
  }
  const double scale = std::pow(2.0, static_cast<double>(n));
  out.value = scale * c;
  out.error *= scale;
  return out;
}

nlohmann::json LeadingConstant::to_json() const {
  nlohmann::json j;
  j["a"] = fmt12(invariants.a_bar.to_double());
  j["b"] = b;
  j["prefactor"] = fmt12(prefactor);
  j["archimedean"] = fmt12(archimedean);
  j["euler_product"] = fmt12(euler_product);
  j["c_bar"] = fmt12(c_bar);
  j["tail_bound"] = std::isfinite(tail_bound) ? nlohmann::json(fmt12(tail_bound)) : nlohmann::json(nullptr);
  j["tauberian"] = fmt12(tauberian);
  j["prime_bound"] = prime_bound;
  return j;
}

LeadingConstant leading_constant(const OrbifoldModel& model, const PlaceSet& S, std::uint64_t prime_bound,
                                 unsigned threads) {
  LeadingConstant lc;
  lc.invariants = predict_invariants(model, S);
  lc.prime_bound = prime_bound;
  const double a = lc.invariants.a_bar.to_double();
  const auto& D = common_divisor(model);
  const double n = static_cast<double>(model.chart_dim());

  if (lc.invariants.b_prime) {
    if (model.divisors.size() != 1) throw std::invalid_argument("dlt leading constant needs a single divisor");
    lc.b = *lc.invariants.b_prime;
    lc.archimedean = std::pow(2.0, n);
    lc.euler_product = 1;
    for (auto p : S.finite) {
      const double pd = static_cast<double>(p);
      lc.euler_product *= (1 - std::pow(pd, -n)) / (n * std::log(pd));
    }
    lc.c_bar = lc.archimedean * lc.euler_product;
    lc.tail_bound = 0;
  } else {
    if (std::any_of(model.divisors.begin(), model.divisors.end(), [](const BoundaryDivisor& E) { return !E.m; })) {
      throw std::invalid_argument("epsilon = 1 needs L = -(K + D) for a leading constant");
    }
    lc.b = lc.invariants.b_bar;
    for (const auto& id : lc.invariants.A_eps) {
      const auto& E = model.divisors[model.divisor_index(id)];
      lc.prefactor /= (static_cast<double>(*E.m) * E.lambda.to_double());
    }
    lc.archimedean = archimedean_density(model, D.lambda.to_double() * a);
    const DensityReport ep = euler_product(model, a, prime_bound, S, threads);
    lc.euler_product = ep.value;
    lc.c_bar = lc.prefactor * lc.archimedean * lc.euler_product;
    lc.tail_bound = std::isfinite(ep.tail_bound) ? std::expm1(ep.tail_bound) : ep.tail_bound;
  }
  double fact = 1;
  for (unsigned i = 2; i < lc.b; ++i) fact *= i;
  lc.tauberian = lc.c_bar / (a * fact);
  return lc;
}

// ---------------------------------------------------------------------------
// twisted factors

LocalFactor twisted_local_density(const OrbifoldModel& model, std::uint64_t p, std::span<const Rational> a) {
  require_good(model, p);
  if (a.size() != model.chart_dim()) throw std::invalid_argument("character needs one coefficient per chart coordinate");
  const int n = static_cast<int>(model.chart_dim());
  LocalFactor f;
  f.substitution = substitution_for(model, p);
  bool trivial = true;
  int j = std::numeric_limits<int>::max();
  for (const auto& c : a) {
    if (c.is_zero()) continue;
    trivial = false;
    j = std::min(j, padic_valuation(c, p));
  }
  if (trivial) return local_density_closed(model, p);
  if (j < 0) return f;  // numerator 0

  const Rational full = Rational(1) - p_power(p, -n);
  std::vector<Rational> c(static_cast<std::size_t>(j) + 2);
  c[0] = 1;
  for (int k = 1; k <= j; ++k) {
    if (campana_at_shell(model, p, k)) c[k] = full;
  }
  if (campana_at_shell(model, p, j + 1)) c[j + 1] = -p_power(p, -n);
  f.numerator = Polynomial(std::move(c));
  return f;
}

Rational box_character_integral(const Rational& c, std::uint64_t p, unsigned k) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  const BigInt pk = mp::pow(BigInt(p), k);
  if (c.is_zero()) return Rational(pk);
  const int v = padic_valuation(c, p);
  // x = u/p^k with u mod p^{k+r}; psi(c u/p^k) is constant on those classes
  const unsigned r = v < 0 ? static_cast<unsigned>(-v) : 0;
  const Rational base = padic_fractional_part(c / Rational(pk), p);
  const std::uint64_t modulus = static_cast<std::uint64_t>(base.denominator());  // p^E
  const std::uint64_t r0 = static_cast<std::uint64_t>(base.numerator());
  const std::uint64_t range = to_u64_checked(mp::pow(BigInt(p), k + r));

  std::vector<std::uint64_t> hist(modulus, 0);
  for (std::uint64_t u = 0; u < range; ++u) {
    ++hist[static_cast<std::uint64_t>((static_cast<unsigned __int128>(r0) * u) % modulus)];
  }

  BigInt total;
  if (modulus == 1) {
    total = hist[0];
  } else {
    // zeta^{b + i p^{E-1}}, 0 <= i < p-1, 0 <= b < p^{E-1} is a Q-basis of Q(zeta_{p^E});
    // rational iff the histogram is constant along each coset b + p^{E-1}Z (b != 0)
    // and constant on the nonzero points of the coset of 0.
    const std::uint64_t step = modulus / p;
    for (std::uint64_t b = 1; b < step; ++b) {
      for (std::uint64_t i = 1; i < p; ++i) {
        if (hist[b + i * step] != hist[b]) throw ArithmeticError("character sum is not rational");
      }
    }
    for (std::uint64_t i = 2; i < p; ++i) {
      if (hist[i * step] != hist[step]) throw ArithmeticError("character sum is not rational");
    }
    total = BigInt(hist[0]) - BigInt(hist[step]);
  }
  return Rational(total, mp::pow(BigInt(p), r));
}

std::vector<Rational> twisted_local_density_oracle(const OrbifoldModel& model, std::uint64_t p,
                                                   std::span<const Rational> a, std::size_t N) {
  require_good(model, p);
  if (a.size() != model.chart_dim()) throw std::invalid_argument("character needs one coefficient per chart coordinate");
  const auto& D = common_divisor(model);
  std::vector<Rational> coeffs(N + 1);
  Rational previous(0);
  for (unsigned k = 0; k <= N; ++k) {
    Rational box(1);
    for (const auto& c : a) box *= box_character_integral(c, p, k);
    const Rational shell = box - previous;
    previous = box;
    if (campana_at_shell(model, p, k)) coeffs[k] = shell * p_power(p, -static_cast<int>(k) * (D.kappa - 1));
  }
  return coeffs;
}

LocalFactor twisted_heisenberg_density(const OrbifoldModel& model, std::uint64_t p, const Rational& a1,
                                       const Rational& a2) {
  if (model.chart_dim() != 3) throw std::invalid_argument("Heisenberg twist needs the 3-dimensional chart");
  // chart order [1:x:y:z]
  const std::vector<Rational> a{a1, a2, Rational(0)};
  return twisted_local_density(model, p, a);
}

std::vector<Rational> twisted_unipotent_density(const OrbifoldModel& model, std::uint64_t p, const Rational& a,
                                                std::size_t N, bool use_oracle) {
  if (model.chart_dim() != 2) throw std::invalid_argument("unipotent twist needs the 2-dimensional chart");
  // chart order [1:y:z]
  const std::vector<Rational> coeffs{Rational(0), a};
  if (use_oracle) return twisted_local_density_oracle(model, p, coeffs, N);
  return twisted_local_density(model, p, coeffs).series(N);
}

}  // namespace campana
