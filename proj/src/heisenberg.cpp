#include "campana/heisenberg.hpp"

#include <array>
#include <stdexcept>

namespace campana {

namespace {

std::array<Rational, 4> as_rationals(const PrimitivePoint& P) {
  if (P.size() != 4) throw std::invalid_argument("Heisenberg actions are defined on P^3");
  return {Rational(P[0]), Rational(P[1]), Rational(P[2]), Rational(P[3])};
}

}  // namespace

std::string GroupElement::str() const {
  return "g(" + x.str() + "," + z.str() + "," + y.str() + ")";
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  return {g.x + h.x, g.z + h.z + g.x * h.y, g.y + h.y};
}

GroupElement inverse(const GroupElement& g) { return {-g.x, g.x * g.y - g.z, -g.y}; }

PrimitivePoint left_act(const GroupElement& g, const PrimitivePoint& P) {
  const auto [a, b, c, d] = as_rationals(P);
  return primitive_rep({a, a * g.x + b, a * g.y + c, a * g.z + d + g.x * c});
}

PrimitivePoint right_act(const PrimitivePoint& P, const GroupElement& g) {
  const auto [a, b, c, d] = as_rationals(P);
  return primitive_rep({a, a * g.x + b, a * g.y + c, a * g.z + b * g.y + d});
}

PrimitivePoint embed(const GroupElement& g) { return primitive_rep({Rational(1), g.x, g.y, g.z}); }

}  // namespace campana
