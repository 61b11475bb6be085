#pragma once

// Exact integer/rational arithmetic, p-adic valuations, primitive projective
// representatives and m-full integer utilities.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace campana {

using BigInt = boost::multiprecision::cpp_int;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT
  Rational(BigInt n, BigInt d);
  Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

  /// Parses "n", "-n" or "n/d".
  static Rational parse(const std::string& text);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_.sign(); }

  Rational operator-() const;
  Rational inverse() const;
  Rational abs() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// Integer power; negative exponents invert.
  Rational pow(int exponent) const;

  /// Largest integer <= value.
  BigInt floor() const;

  double to_double() const;
  std::string str() const;

 private:
  void normalize();

  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

/// Integer point of projective space with coprime coordinates whose first
/// nonzero coordinate is positive.
class PrimitivePoint {
 public:
  /// Validates primitivity and sign normalization; throws otherwise.
  explicit PrimitivePoint(std::vector<BigInt> coords);

  const std::vector<BigInt>& coords() const { return coords_; }
  const BigInt& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }
  /// Ambient projective dimension n (the point has n+1 coordinates).
  std::size_t dimension() const { return coords_.size() - 1; }

  friend bool operator==(const PrimitivePoint&, const PrimitivePoint&) = default;

  std::string str() const;

 private:
  struct Trusted {};
  PrimitivePoint(std::vector<BigInt> coords, Trusted) : coords_(std::move(coords)) {}
  friend PrimitivePoint primitive_rep(std::span<const Rational> coords);
  friend PrimitivePoint primitive_rep_integral(std::vector<BigInt> coords);

  std::vector<BigInt> coords_;
};

std::ostream& operator<<(std::ostream& os, const PrimitivePoint& p);

/// Set of places: the archimedean place is always a member; finite primes are
/// listed explicitly.
struct PlaceSet {
  std::set<std::uint64_t> finite;

  bool contains(std::uint64_t p) const { return finite.contains(p); }
  static PlaceSet archimedean_only() { return {}; }
  /// Parses a comma list such as "inf,2,3" ("inf"/"infinity" optional).
  static PlaceSet parse(const std::string& text);
  std::string str() const;

  friend bool operator==(const PlaceSet&, const PlaceSet&) = default;
};

// ---------------------------------------------------------------------------
// primes and factorization (trial division; inputs < 2^63)

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Ascending prime factorization of n >= 1.
std::vector<PrimePower> factorize(std::uint64_t n);

/// Converts |n| to uint64 or throws if it does not fit below 2^63.
std::uint64_t to_u64_checked(const BigInt& n);

// ---------------------------------------------------------------------------
// valuations

/// Exponent of p in nonzero integer n.
int padic_valuation(const BigInt& n, std::uint64_t p);

/// Exponent of p in q (negative when p divides the denominator).
/// Throws ArithmeticError("valuation undefined") for q = 0 and
/// std::invalid_argument when p is not prime.
int padic_valuation(const Rational& q, std::uint64_t p);

/// Canonical projective representative of a nonzero rational vector.
PrimitivePoint primitive_rep(std::span<const Rational> coords);
PrimitivePoint primitive_rep(std::initializer_list<Rational> coords);
/// Same for integer input (no denominators to clear).
PrimitivePoint primitive_rep_integral(std::vector<BigInt> coords);

/// {q}_p: the rational in [0,1) with p-power denominator such that
/// q - {q}_p lies in Z_p.
Rational padic_fractional_part(const Rational& q, std::uint64_t p);

// ---------------------------------------------------------------------------
// m-full integers

/// m = nullopt encodes m = infinity: only S-units qualify.
using Multiplicity = std::optional<unsigned>;

std::string multiplicity_str(const Multiplicity& m);
Multiplicity parse_multiplicity(const std::string& text);

/// True iff every prime p outside S has v_p(n) = 0 or v_p(n) >= m.
bool is_mfull(std::uint64_t n, const Multiplicity& m, const PlaceSet& S);

/// Ascending list of all m-full n <= X, produced directly from prime powers.
std::vector<std::uint64_t> mfull_up_to(std::uint64_t X, const Multiplicity& m,
                                       const PlaceSet& S);

/// Integer k-th root: largest r with r^k <= n.
std::uint64_t integer_root(std::uint64_t n, unsigned k);

}  // namespace campana
