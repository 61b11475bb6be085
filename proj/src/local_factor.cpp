#include "campana/local_factor.hpp"

#include <cmath>
#include <sstream>

namespace campana {

Polynomial::Polynomial(Rational constant) : c_{std::move(constant)} { trim(); }

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(const Rational& c, std::size_t k) {
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Polynomial::coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

Rational Polynomial::eval(const Rational& t) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Polynomial::eval(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + it->to_double();
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size());
  for (std::size_t i = 0; i < rhs.c_.size(); ++i) c_[i] += rhs.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size());
  for (std::size_t i = 0; i < rhs.c_.size(); ++i) c_[i] -= rhs.c_[i];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(out));
}

std::string Polynomial::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    Rational mag = c_[k].abs();
    if (first) {
      if (c_[k].sign() < 0) os << "-";
    } else {
      os << (c_[k].sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag.str();
      continue;
    }
    if (mag != Rational(1)) os << mag.str() << "*";
    os << "t";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

double Substitution::exponent_at(double s) const { return lambda.to_double() * s - shift; }

double Substitution::t_at(double s) const {
  return std::pow(static_cast<double>(prime), -exponent_at(s));
}

std::vector<Rational> LocalFactor::series(std::size_t N) const {
  if (denominator.coeff(0) != Rational(1)) throw std::invalid_argument("denominator(0) must be 1");
  std::vector<Rational> out(N + 1);
  const int dd = denominator.degree();
  for (std::size_t k = 0; k <= N; ++k) {
    Rational ck = numerator.coeff(k);
    for (int j = 1; j <= dd && static_cast<std::size_t>(j) <= k; ++j) {
      ck -= denominator.coeffs()[j] * out[k - j];
    }
    out[k] = ck;
  }
  return out;
}

Rational LocalFactor::at_t(const Rational& t) const { return numerator.eval(t) / denominator.eval(t); }

double LocalFactor::at_t(double t) const { return numerator.eval(t) / denominator.eval(t); }

LocalFactor LocalFactor::times(const Polynomial& q) const {
  LocalFactor out = *this;
  out.numerator = numerator * q;
  return out.reduced();
}

LocalFactor LocalFactor::reduced() const {
  LocalFactor out = *this;
  // synthetic division by (1 - t) while both sides vanish at t = 1
  auto divide_one_minus_t = [](const Polynomial& p) {
    // p(t) = (1 - t) q(t): q_k = sum_{i<=k} p_i
    std::vector<Rational> q;
    Rational acc(0);
    for (int k = 0; k < p.degree(); ++k) {
      acc += p.coeffs()[k];
      q.push_back(acc);
    }
    return Polynomial(std::move(q));
  };
  while (out.denominator.degree() > 0 && out.denominator.eval(Rational(1)).is_zero() &&
         out.numerator.eval(Rational(1)).is_zero() && !out.numerator.is_zero()) {
    out.numerator = divide_one_minus_t(out.numerator);
    out.denominator = divide_one_minus_t(out.denominator);
  }
  return out;
}

}  // namespace campana
