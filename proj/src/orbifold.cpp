#include "campana/orbifold.hpp"

#include <algorithm>
#include <bit>

namespace campana {

namespace mp = boost::multiprecision;

Rational BoundaryDivisor::epsilon() const {
  if (!m) return Rational(1);
  return Rational(1) - Rational(1, static_cast<long long>(*m));
}

std::size_t OrbifoldModel::divisor_index(const DivisorId& id) const {
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    if (divisors[i].id == id) return i;
  }
  throw std::invalid_argument("unknown divisor '" + id + "' in model " + name);
}

unsigned OrbifoldModel::multiplicity_rule(const PrimitivePoint& P, std::size_t divisor,
                                          std::uint64_t p) const {
  const BigInt s = boundary_section(P, divisor);
  if (s == 0) throw BoundaryPointError();
  return static_cast<unsigned>(padic_valuation(s, p));
}

namespace {

// P^n with the single boundary hyperplane {x_0 = 0}; the group is the
// affine chart [1 : x_1 : ... : x_n].
OrbifoldModel projective_space_model(std::string name, std::size_t n, int kappa,
                                     const Multiplicity& m, std::optional<Rational> lambda) {
  if (kappa < 2) throw std::invalid_argument("kappa must be >= 2");
  BoundaryDivisor D;
  D.id = "D";
  D.kappa = kappa;
  D.m = m;
  D.lambda = lambda ? *lambda : (m ? Rational(1) : Rational(kappa - 1));

  OrbifoldModel model;
  model.name = std::move(name);
  model.ambient_dim = n;
  model.divisors = {D};

  model.stratum_enumerator = [n](StratumKey B, std::uint64_t p) -> BigInt {
    const BigInt pn = mp::pow(BigInt(p), static_cast<unsigned>(n));
    if (B == 0) return pn;
    if (B == 1) return (pn - 1) / (p - 1);
    return BigInt(0);
  };

  model.for_each_fp_point = [n](std::uint64_t p,
                                const std::function<void(std::span<const std::uint64_t>)>& visit) {
    std::vector<std::uint64_t> coords(n + 1, 0);
    for (std::size_t lead = 0; lead <= n; ++lead) {
      std::fill(coords.begin(), coords.end(), 0);
      coords[lead] = 1;
      // odometer over the coordinates after the leading 1
      for (;;) {
        visit(coords);
        std::size_t i = n;
        while (i > lead && coords[i] + 1 == p) coords[i--] = 0;
        if (i == lead) break;
        ++coords[i];
      }
    }
  };

  model.fp_classifier = [](std::span<const std::uint64_t> pt, std::uint64_t) -> StratumKey {
    return pt[0] == 0 ? StratumKey{1} : StratumKey{0};
  };

  model.boundary_section = [](const PrimitivePoint& P, std::size_t) -> BigInt { return P[0]; };

  model.chart = [n](std::span<const Rational> xs) {
    if (xs.size() != n) throw std::invalid_argument("chart expects " + std::to_string(n) + " coordinates");
    std::vector<Rational> coords;
    coords.reserve(n + 1);
    coords.emplace_back(1);
    coords.insert(coords.end(), xs.begin(), xs.end());
    return primitive_rep(coords);
  };

  // A hyperplane has points over every completion; there is only one divisor.
  model.has_local_point = [](StratumKey B, Place) { return B <= 1; };
  return model;
}

}  // namespace

std::vector<std::string> builtin_model_names() { return {"p3-heisenberg", "p2-unipotent", "p1-vector"}; }

OrbifoldModel builtin_model(const std::string& name, const Multiplicity& m,
                            std::optional<Rational> lambda) {
  if (lambda && lambda->sign() <= 0) throw std::invalid_argument("L not in effective-cone interior");
  if (name == "p3-heisenberg") return projective_space_model(name, 3, 4, m, lambda);
  if (name == "p2-unipotent") {
    // Y = closure of U = {g(0,z,y)} in P^3: the plane {b = 0}, coordinates
    // [a:c:d] = [1:y:z]; D^Y = D cap Y.
    OrbifoldModel model = projective_space_model(name, 2, 3, m, lambda);
    model.ambient = OrbifoldModel::Ambient{
        "p3-heisenberg", {4}, [](const PrimitivePoint& P) {
          return primitive_rep_integral({P[0], BigInt(0), P[1], P[2]});
        }};
    return model;
  }
  if (name == "p1-vector") return projective_space_model(name, 1, 2, m, lambda);
  throw std::invalid_argument("unknown model '" + name + "'");
}

unsigned intersection_multiplicity(const OrbifoldModel& model, const PrimitivePoint& P,
                                   const DivisorId& divisor, std::uint64_t p) {
  if (P.dimension() != model.ambient_dim) throw std::invalid_argument("point dimension mismatch");
  if (model.bad_primes.contains(p)) {
    throw std::invalid_argument("no integral model data at bad prime " + std::to_string(p));
  }
  return model.multiplicity_rule(P, model.divisor_index(divisor), p);
}

bool is_campana(const OrbifoldModel& model, const PrimitivePoint& P, const PlaceSet& S) {
  if (P.dimension() != model.ambient_dim) throw std::invalid_argument("point dimension mismatch");
  for (std::size_t i = 0; i < model.divisors.size(); ++i) {
    const BigInt s = model.boundary_section(P, i);
    if (s == 0) throw BoundaryPointError();
    const auto& m = model.divisors[i].m;
    if (m && *m == 1) continue;
    for (const auto& [p, e] : factorize(to_u64_checked(s))) {
      if (S.contains(p)) continue;
      if (model.bad_primes.contains(p)) {
        throw std::invalid_argument("no integral model data at bad prime " + std::to_string(p));
      }
      if (!m || e < *m) return false;
    }
  }
  return true;
}

Invariants predict_invariants(const OrbifoldModel& model, const PlaceSet& S) {
  if (model.divisors.empty()) throw std::invalid_argument("model has no boundary divisors");
  for (const auto& D : model.divisors) {
    if (D.lambda.sign() <= 0) throw std::invalid_argument("L not in effective-cone interior");
  }
  Invariants inv;
  std::vector<Rational> ratios;
  for (const auto& D : model.divisors) ratios.push_back((Rational(D.kappa) - D.epsilon()) / D.lambda);
  inv.a_bar = *std::max_element(ratios.begin(), ratios.end());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] == inv.a_bar) inv.A_eps.push_back(model.divisors[i].id);
  }
  inv.b_bar = static_cast<unsigned>(inv.A_eps.size());

  const bool has_nklt = std::any_of(model.divisors.begin(), model.divisors.end(),
                                     [](const BoundaryDivisor& D) { return !D.is_klt(); });
  const bool log_anticanonical =
      std::all_of(model.divisors.begin(), model.divisors.end(), [](const BoundaryDivisor& D) {
        return D.lambda == Rational(D.kappa) - D.epsilon();
      });
  if (has_nklt && log_anticanonical) {
    StratumKey nklt = 0;
    unsigned klt = 0;
    for (std::size_t i = 0; i < model.divisors.size(); ++i) {
      if (model.divisors[i].is_klt()) {
        ++klt;
      } else {
        nklt |= StratumKey{1} << i;
      }
    }
    std::vector<Place> places{kArchimedean};
    places.insert(places.end(), S.finite.begin(), S.finite.end());
    unsigned b_prime = klt;
    for (Place v : places) {
      unsigned best = 0;
      // all subsets B of the non-klt divisors
      for (StratumKey B = nklt;; B = (B - 1) & nklt) {
        if (model.has_local_point(B, v)) {
          best = std::max(best, static_cast<unsigned>(std::popcount(B)));
        }
        if (B == 0) break;
      }
      b_prime += best;
    }
    inv.b_prime = b_prime;
  }
  return inv;
}

BigInt count_fp_points(const OrbifoldModel& model, std::uint64_t p) {
  BigInt total = 0;
  model.for_each_fp_point(p, [&](std::span<const std::uint64_t>) { total += 1; });
  return total;
}

}  // namespace campana
