#include "campana/exact_arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace campana {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_ == 0) throw ArithmeticError("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  if (den_ == 1) return;
  BigInt g = mp::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(const std::string& text) {
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto parse_int = [&](const std::string& part) {
    if (part.empty() || part.find_first_not_of("+-0123456789") != std::string::npos ||
        part.find_first_of("0123456789") == std::string::npos) {
      throw std::invalid_argument("malformed rational: " + text);
    }
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string frac = s.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("malformed rational: " + text);
    }
    std::string whole = s.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt digits = frac.empty() ? BigInt(0) : BigInt(frac);
    BigInt w = parse_int(whole);
    BigInt n = (negative ? -1 : 1) * (mp::abs(w) * scale + digits);
    return Rational(n, scale);
  }
  return Rational(parse_int(s));
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational Rational::inverse() const {
  if (num_ == 0) throw ArithmeticError("inverse of zero");
  return Rational(den_, num_);
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational& Rational::operator+=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    num_ += rhs.num_;
  } else {
    num_ = num_ * rhs.den_ + rhs.num_ * den_;
    den_ *= rhs.den_;
  }
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  num_ *= rhs.num_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) { return *this *= rhs.inverse(); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const BigInt lhs = a.num_ * b.den_;
  const BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  const auto e = static_cast<unsigned>(exponent);
  return Rational(mp::pow(num_, e), mp::pow(den_, e));
}

BigInt Rational::floor() const {
  BigInt q = num_ / den_;
  if (num_.sign() < 0 && q * den_ != num_) q -= 1;
  return q;
}

double Rational::to_double() const {
  return mp::cpp_rational(num_, den_).convert_to<double>();
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

// ---------------------------------------------------------------------------
// PrimitivePoint

PrimitivePoint::PrimitivePoint(std::vector<BigInt> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("projective point needs >= 2 coordinates");
  BigInt g = 0;
  const BigInt* first_nonzero = nullptr;
  for (const auto& c : coords_) {
    g = mp::gcd(g, c);
    if (!first_nonzero && c != 0) first_nonzero = &c;
  }
  if (!first_nonzero) throw ArithmeticError("all-zero projective coordinates");
  if (g != 1) throw std::invalid_argument("coordinates are not coprime");
  if (first_nonzero->sign() < 0) throw std::invalid_argument("first nonzero coordinate is negative");
}

std::string PrimitivePoint::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ":";
    out += coords_[i].str();
  }
  return out + "]";
}

std::ostream& operator<<(std::ostream& os, const PrimitivePoint& p) { return os << p.str(); }

// ---------------------------------------------------------------------------
// PlaceSet

PlaceSet PlaceSet::parse(const std::string& text) {
  PlaceSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty() || item == "inf" || item == "infinity" || item == "oo") continue;
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad place: " + item);
    }
    const std::uint64_t p = std::stoull(item);
    if (!is_prime(p)) throw std::invalid_argument("place is not prime: " + item);
    out.finite.insert(p);
  }
  return out;
}

std::string PlaceSet::str() const {
  std::string out = "inf";
  for (auto p : finite) out += "," + std::to_string(p);
  return out;
}

// ---------------------------------------------------------------------------
// primes

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all n < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    if (i <= limit / i) {
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  return out;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw ArithmeticError("cannot factor zero");
  std::vector<PrimePower> out;
  auto strip = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p <= n / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::uint64_t to_u64_checked(const BigInt& n) {
  const BigInt a = mp::abs(n);
  if (a >= (BigInt(1) << 63)) throw std::out_of_range("integer too large for trial division");
  return a.convert_to<std::uint64_t>();
}

// ---------------------------------------------------------------------------
// valuations

namespace {

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

int valuation_unchecked(BigInt n, std::uint64_t p) {
  int v = 0;
  if (n.sign() < 0) n = -n;
  if (n < (BigInt(1) << 63)) {
    auto m = n.convert_to<std::uint64_t>();
    while (m % p == 0) {
      m /= p;
      ++v;
    }
    return v;
  }
  const BigInt bp(p);
  BigInt q, r;
  for (;;) {
    mp::divide_qr(n, bp, q, r);
    if (r != 0) return v;
    n = q;
    ++v;
  }
}

// Inverse of a modulo m (gcd(a, m) = 1), result in [0, m).
BigInt mod_inverse(BigInt a, const BigInt& m) {
  BigInt r0 = m, r1 = ((a % m) + m) % m;
  BigInt s0 = 0, s1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    BigInt s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw ArithmeticError("no modular inverse");
  return ((s0 % m) + m) % m;
}

}  // namespace

int padic_valuation(const BigInt& n, std::uint64_t p) {
  if (n == 0) throw ArithmeticError("valuation undefined");
  require_prime(p);
  return valuation_unchecked(n, p);
}

int padic_valuation(const Rational& q, std::uint64_t p) {
  if (q.is_zero()) throw ArithmeticError("valuation undefined");
  require_prime(p);
  return valuation_unchecked(q.numerator(), p) - valuation_unchecked(q.denominator(), p);
}

PrimitivePoint primitive_rep_integral(std::vector<BigInt> coords) {
  if (coords.size() < 2) throw std::invalid_argument("projective point needs >= 2 coordinates");
  BigInt g = 0;
  for (const auto& c : coords) g = mp::gcd(g, c);
  if (g == 0) throw ArithmeticError("all-zero projective coordinates");
  const auto first = std::find_if(coords.begin(), coords.end(), [](const BigInt& c) { return c != 0; });
  if (first->sign() < 0) g = -g;
  if (g != 1) {
    for (auto& c : coords) c /= g;
  }
  return PrimitivePoint(std::move(coords), PrimitivePoint::Trusted{});
}

PrimitivePoint primitive_rep(std::span<const Rational> coords) {
  BigInt l = 1;
  for (const auto& q : coords) l = mp::lcm(l, q.denominator());
  std::vector<BigInt> ints;
  ints.reserve(coords.size());
  for (const auto& q : coords) ints.push_back(q.numerator() * (l / q.denominator()));
  return primitive_rep_integral(std::move(ints));
}

PrimitivePoint primitive_rep(std::initializer_list<Rational> coords) {
  return primitive_rep(std::span<const Rational>(coords.begin(), coords.size()));
}

Rational padic_fractional_part(const Rational& q, std::uint64_t p) {
  require_prime(p);
  if (q.is_zero()) return Rational(0);
  const int k = valuation_unchecked(q.denominator(), p);
  if (k == 0) return Rational(0);
  const BigInt pk = mp::pow(BigInt(p), static_cast<unsigned>(k));
  const BigInt unit_den = q.denominator() / pk;
  // r = n * d'^{-1} mod p^k
  BigInt r = (q.numerator() % pk) * mod_inverse(unit_den, pk) % pk;
  if (r.sign() < 0) r += pk;
  return Rational(r, pk);
}

// ---------------------------------------------------------------------------
// m-full integers

std::string multiplicity_str(const Multiplicity& m) {
  return m ? std::to_string(*m) : std::string("infinity");
}

Multiplicity parse_multiplicity(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return std::nullopt;
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("multiplicity must be a positive integer or 'infinity': " + text);
  }
  const unsigned long v = std::stoul(text);
  if (v == 0) throw std::invalid_argument("multiplicity must be >= 1");
  return static_cast<unsigned>(v);
}

bool is_mfull(std::uint64_t n, const Multiplicity& m, const PlaceSet& S) {
  if (n == 0) throw std::invalid_argument("is_mfull needs n >= 1");
  if (m && *m == 1) return true;
  for (const auto& [p, e] : factorize(n)) {
    if (S.contains(p)) continue;
    if (!m || e < *m) return false;
  }
  return true;
}

std::uint64_t integer_root(std::uint64_t n, unsigned k) {
  if (k == 0) throw std::invalid_argument("zeroth root");
  if (k == 1 || n < 2) return n;
  auto fits = [&](std::uint64_t r) {
    std::uint64_t acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      if (acc > n / r) return false;
      acc *= r;
    }
    return acc <= n;
  };
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

namespace {

// Appends cur * (all products of primes[idx..] raised to exponents >= m) <= X.
void extend_mfull(std::uint64_t X, unsigned m, const std::vector<std::uint64_t>& primes,
                  std::size_t idx, std::uint64_t cur, std::vector<std::uint64_t>& out) {
  out.push_back(cur);
  for (std::size_t i = idx; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    std::uint64_t limit = X / cur;
    std::uint64_t pe = 1;
    bool fits = true;
    for (unsigned j = 0; j < m; ++j) {
      if (pe > limit / p) {
        fits = false;
        break;
      }
      pe *= p;
    }
    if (!fits) break;  // primes ascend, so no later prime fits either
    for (;;) {
      extend_mfull(X, m, primes, i + 1, cur * pe, out);
      if (pe > limit / p) break;
      pe *= p;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> mfull_up_to(std::uint64_t X, const Multiplicity& m, const PlaceSet& S) {
  std::vector<std::uint64_t> out;
  if (X == 0) return out;
  if (m && *m == 1) {
    out.resize(X);
    std::iota(out.begin(), out.end(), 1);
    return out;
  }

  // S-units up to X: any exponent on primes of S.
  std::vector<std::uint64_t> units{1};
  for (auto p : S.finite) {
    const std::size_t count = units.size();
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t v = units[i];
      while (v <= X / p) {
        v *= p;
        units.push_back(v);
      }
    }
  }

  if (!m) {
    std::sort(units.begin(), units.end());
    return units;
  }

  std::vector<std::uint64_t> primes;
  for (auto p : primes_up_to(integer_root(X, *m))) {
    if (!S.contains(p)) primes.push_back(p);
  }
  for (auto u : units) extend_mfull(X, *m, primes, 0, u, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace campana
