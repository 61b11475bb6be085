#pragma once

// Local and global height pairings for the max-norm metrization.

#include <map>

#include "campana/orbifold.hpp"

namespace campana {

/// Exponent vector s = (s_a) indexed by divisor id.
struct HeightParams {
  std::map<DivisorId, Rational> s;

  static HeightParams from_model(const OrbifoldModel& model);
  HeightParams operator+(const HeightParams& other) const;
  bool is_integral() const;
};

/// ||f_a(P)||_v = |f_a(P)|_v / max_i |P_i|_v on primitive coordinates; at a
/// finite place this is p^{-n_p(D_a, P)}. v = kArchimedean for the real place.
Rational local_height(const OrbifoldModel& model, const PrimitivePoint& P, const DivisorId& divisor,
                      Place v);

/// H(P, s) = prod_a (prod_v ||f_a(P)||_v)^{-s_a}; exact when every s_a is an
/// integer, otherwise throws std::invalid_argument.
Rational height_exact(const OrbifoldModel& model, const PrimitivePoint& P, const HeightParams& s);
Rational height_exact(const OrbifoldModel& model, const PrimitivePoint& P);

/// Same pairing in floating point (any rational exponents).
double height(const OrbifoldModel& model, const PrimitivePoint& P, const HeightParams& s);
double height(const OrbifoldModel& model, const PrimitivePoint& P);

}  // namespace campana
