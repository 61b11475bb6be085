#pragma once

// Rational functions in one formal variable t with exact coefficients.

#include <cstdint>
#include <string>
#include <vector>

#include "campana/exact_arith.hpp"

namespace campana {

/// Dense polynomial sum_k c[k] t^k over Q; trailing zeros are trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(Rational constant);  // NOLINT(google-explicit-constructor)
  explicit Polynomial(std::vector<Rational> coeffs);

  /// c * t^k.
  static Polynomial monomial(const Rational& c, std::size_t k);

  const std::vector<Rational>& coeffs() const { return c_; }
  /// Coefficient of t^k (zero beyond the degree).
  Rational coeff(std::size_t k) const;
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  Rational eval(const Rational& t) const;
  double eval(double t) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// "1 + 7/8*t^2 - t^3".
  std::string str() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// t = p^{-(lambda*s - shift)}, shift = kappa - 1.
struct Substitution {
  std::uint64_t prime = 2;
  Rational lambda{1};
  int shift = 0;

  double t_at(double s) const;
  /// lambda*s - shift, the exponent w with t = p^{-w}.
  double exponent_at(double s) const;
};

/// numerator(t) / denominator(t), denominator(0) = 1.
struct LocalFactor {
  Polynomial numerator;
  Polynomial denominator{Rational(1)};
  Substitution substitution;

  /// Power-series coefficients c_0 .. c_N (exact).
  std::vector<Rational> series(std::size_t N) const;

  Rational at_t(const Rational& t) const;
  double at_t(double t) const;
  double at_s(double s) const { return at_t(substitution.t_at(s)); }

  /// Multiplies the numerator by q.
  LocalFactor times(const Polynomial& q) const;
  /// Cancels a common factor (1 - t) when present, keeping denominator(0) = 1.
  LocalFactor reduced() const;
};

}  // namespace campana
