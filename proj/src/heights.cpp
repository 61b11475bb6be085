#include "campana/heights.hpp"

#include <cmath>

namespace campana {

namespace mp = boost::multiprecision;

HeightParams HeightParams::from_model(const OrbifoldModel& model) {
  HeightParams hp;
  for (const auto& D : model.divisors) hp.s[D.id] = D.lambda;
  return hp;
}

HeightParams HeightParams::operator+(const HeightParams& other) const {
  HeightParams out = *this;
  for (const auto& [id, v] : other.s) out.s[id] += v;
  return out;
}

bool HeightParams::is_integral() const {
  for (const auto& [id, v] : s) {
    if (!v.is_integer()) return false;
  }
  return true;
}

Rational local_height(const OrbifoldModel& model, const PrimitivePoint& P, const DivisorId& divisor,
                      Place v) {
  const BigInt section = model.boundary_section(P, model.divisor_index(divisor));
  if (section == 0) throw BoundaryPointError();
  if (v == kArchimedean) {
    BigInt biggest = 0;
    for (const auto& c : P.coords()) biggest = mp::max(biggest, BigInt(mp::abs(c)));
    return Rational(mp::abs(section), biggest);
  }
  if (model.bad_primes.contains(v)) throw std::invalid_argument("bad prime has no model metric");
  // primitive coordinates have max |.|_p = 1
  return Rational(1) / Rational(mp::pow(BigInt(v), static_cast<unsigned>(padic_valuation(section, v))));
}

namespace {

// prod_v ||f_a(P)||_v, collecting the finite places where the section is
// not a unit.
Rational global_norm(const OrbifoldModel& model, const PrimitivePoint& P, const DivisorId& id) {
  Rational prod = local_height(model, P, id, kArchimedean);
  const BigInt section = model.boundary_section(P, model.divisor_index(id));
  for (const auto& pp : factorize(to_u64_checked(section))) {
    prod *= local_height(model, P, id, pp.prime);
  }
  return prod;
}

}  // namespace

Rational height_exact(const OrbifoldModel& model, const PrimitivePoint& P, const HeightParams& s) {
  if (!s.is_integral()) throw std::invalid_argument("exact height needs integral exponents");
  Rational h(1);
  for (const auto& [id, exponent] : s.s) {
    const int e = static_cast<int>(exponent.numerator());
    h *= global_norm(model, P, id).pow(-e);
  }
  return h;
}

Rational height_exact(const OrbifoldModel& model, const PrimitivePoint& P) {
  return height_exact(model, P, HeightParams::from_model(model));
}

double height(const OrbifoldModel& model, const PrimitivePoint& P, const HeightParams& s) {
  double h = 1.0;
  for (const auto& [id, exponent] : s.s) {
    h *= std::pow(global_norm(model, P, id).to_double(), -exponent.to_double());
  }
  return h;
}

double height(const OrbifoldModel& model, const PrimitivePoint& P) {
  return height(model, P, HeightParams::from_model(model));
}

}  // namespace campana
