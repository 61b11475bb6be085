#pragma once

// The Heisenberg group of upper unitriangular 3x3 matrices over Q and its
// left/right actions on P^3.

#include <string>

#include "campana/exact_arith.hpp"

namespace campana {

/// g(x, z, y) =
///   [1 x z]
///   [0 1 y]
///   [0 0 1]
struct GroupElement {
  Rational x;
  Rational z;
  Rational y;

  static GroupElement identity() { return {}; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  std::string str() const;
};

/// Matrix product g*h: (x+x', z+z'+x*y', y+y').
GroupElement compose(const GroupElement& g, const GroupElement& h);
/// (-x, x*y - z, -y).
GroupElement inverse(const GroupElement& g);

/// g . [a:b:c:d] = [a : ax+b : ay+c : az+d+xc].
PrimitivePoint left_act(const GroupElement& g, const PrimitivePoint& P);
/// [a:b:c:d] . g = [a : ax+b : ay+c : az+by+d].
PrimitivePoint right_act(const PrimitivePoint& P, const GroupElement& g);

/// Open embedding G -> P^3, g(x,z,y) -> [1:x:y:z].
PrimitivePoint embed(const GroupElement& g);

}  // namespace campana
