#include "campana/counting.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <limits>
#include <map>
#include <sstream>

#include "format.hpp"
#include "parallel.hpp"

namespace campana {

namespace mp = boost::multiprecision;

namespace {

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("height bound must be finite");
  int e = 0;
  const double frac = std::frexp(x, &e);
  const auto mant = static_cast<long long>(std::ldexp(frac, 53));
  return Rational(mant) * Rational(2).pow(e - 53);
}

const BoundaryDivisor& single_divisor(const OrbifoldModel& model) {
  if (model.divisors.size() != 1) throw std::invalid_argument("counting supports single-divisor models");
  return model.divisors.front();
}

// x_1..x_n in [-B, B]^n with a the fixed first coordinate; calls fn(coords)
// for every primitive tuple in lexicographic order.
template <class Fn>
void for_each_primitive_tuple(std::int64_t a, std::int64_t B, std::size_t n, Fn&& fn) {
  std::vector<std::int64_t> x(n, -B);
  std::vector<std::int64_t> g(n + 1);  // running gcd prefix
  for (;;) {
    g[0] = a;
    for (std::size_t i = 0; i < n; ++i) g[i + 1] = std::gcd(g[i], x[i]);
    if (g[n] == 1) fn(x);
    std::size_t i = n;
    while (i > 0 && x[i - 1] == B) x[--i] = -B;
    if (i == 0) break;
    ++x[i - 1];
  }
}

PrimitivePoint make_point(std::int64_t a, const std::vector<std::int64_t>& x) {
  std::vector<BigInt> coords;
  coords.reserve(x.size() + 1);
  coords.emplace_back(a);
  for (auto v : x) coords.emplace_back(v);
  return PrimitivePoint(std::move(coords));
}

void check_cap(std::uint64_t B, std::size_t n, std::uint64_t cap) {
  long double tuples = static_cast<long double>(B);
  for (std::size_t i = 0; i < n; ++i) tuples *= static_cast<long double>(2 * B + 1);
  if (tuples > static_cast<long double>(cap)) {
    throw std::length_error("T too large for brute-force enumeration (" + std::to_string(B) +
                            " per coordinate); use count_fast");
  }
}

// sum_{e | rad a} mu(e) (2 floor(h/e) + 1)^n
BigInt coprime_box_count(const std::vector<std::uint64_t>& rad_primes, std::uint64_t h, unsigned n) {
  BigInt total = 0;
  const std::size_t k = rad_primes.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::uint64_t e = 1;
    bool too_big = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        e *= rad_primes[i];
        if (e > h) {
          too_big = true;
          break;
        }
      }
    }
    const std::uint64_t q = too_big ? 0 : h / e;
    const BigInt term = mp::pow(BigInt(2 * q + 1), n);
    if (std::popcount(mask) % 2) {
      total -= term;
    } else {
      total += term;
    }
  }
  return total;
}

std::vector<std::uint64_t> radical_primes(std::uint64_t a) {
  std::vector<std::uint64_t> out;
  for (const auto& pp : factorize(a)) out.push_back(pp.prime);
  return out;
}

// Exact heights and Campana predicates for points of one model. With the
// max-norm metrization a height depends only on the boundary section values
// and max |P_i|, and the Campana predicate only on the section values, so
// both are memoized on those keys.
class SectionMemo {
 public:
  SectionMemo(const OrbifoldModel& model, const HeightParams& params) : model_(model) {
    for (const auto& [id, e] : params.s) {
      terms_.push_back({id, static_cast<int>(e.numerator())});
    }
  }

  // Fills the section values of P; false if P lies on the boundary.
  void load(const PrimitivePoint& P) {
    key_.resize(model_.divisors.size() + 1);
    for (std::size_t i = 0; i < model_.divisors.size(); ++i) {
      key_[i] = model_.boundary_section(P, i);
      if (key_[i] == 0) throw BoundaryPointError();
    }
    BigInt mx = 0;
    for (const auto& c : P.coords()) mx = std::max(mx, BigInt(mp::abs(c)));
    key_.back() = std::move(mx);
  }

  const Rational& height(const PrimitivePoint& P) {
    if (height_valid_ && key_ == height_key_) return last_height_;
    auto it = heights_.find(key_);
    if (it == heights_.end()) it = heights_.emplace(key_, height_exact(model_, P, exponents())).first;
    height_key_ = key_;
    height_valid_ = true;
    last_height_ = it->second;
    return last_height_;
  }

  bool campana(const PrimitivePoint& P, const PlaceSet& S) {
    const std::size_t r = model_.divisors.size();
    if (campana_valid_ && std::equal(key_.begin(), key_.begin() + r, campana_key_.begin())) return last_campana_;
    campana_key_.assign(key_.begin(), key_.begin() + r);
    auto it = campana_.find(campana_key_);
    if (it == campana_.end()) it = campana_.emplace(campana_key_, is_campana(model_, P, S)).first;
    campana_valid_ = true;
    last_campana_ = it->second;
    return last_campana_;
  }

 private:
  struct Term {
    DivisorId id;
    int exponent;
  };

  HeightParams exponents() const {
    HeightParams hp;
    for (const auto& t : terms_) hp.s[t.id] = Rational(t.exponent);
    return hp;
  }

  const OrbifoldModel& model_;
  std::vector<Term> terms_;
  std::vector<BigInt> key_;
  std::map<std::vector<BigInt>, Rational> heights_;
  std::vector<BigInt> height_key_;
  Rational last_height_;
  bool height_valid_ = false;
  std::map<std::vector<BigInt>, bool> campana_;
  std::vector<BigInt> campana_key_;
  bool last_campana_ = false;
  bool campana_valid_ = false;
};

nlohmann::json bigint_json(const BigInt& n) {
  if (n >= 0 && n <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return static_cast<std::uint64_t>(n);
  }
  return n.str();
}

}  // namespace

std::uint64_t effective_height_bound(double T, const Rational& lambda) {
  if (lambda.sign() <= 0) throw std::invalid_argument("L not in effective-cone interior");
  if (!(T >= 1)) return 0;
  const Rational Tq = exact_from_double(T);
  const int u = static_cast<int>(lambda.numerator());
  const int v = static_cast<int>(lambda.denominator());
  const Rational Tv = Tq.pow(v);
  // b^u <= T^v
  auto fits = [&](std::uint64_t b) { return Rational(BigInt(b)).pow(u) <= Tv; };
  auto b = static_cast<std::uint64_t>(std::floor(std::pow(T, 1.0 / lambda.to_double())));
  b = std::max<std::uint64_t>(b, 1);
  while (b > 1 && !fits(b)) --b;
  while (fits(b + 1)) ++b;
  return b;
}

std::uint64_t enumerate_campana(const OrbifoldModel& model, double T, const PlaceSet& S, std::uint64_t cap,
                                const PointVisitor& visit) {
  const auto& D = single_divisor(model);
  const std::uint64_t B = effective_height_bound(T, D.lambda);
  if (B == 0) return 0;
  const std::size_t n = model.chart_dim();
  check_cap(B, n, cap);
  const Rational Tq = exact_from_double(T);
  const HeightParams params = HeightParams::from_model(model);
  const bool exact = params.is_integral();

  std::uint64_t count = 0;
  const auto Bs = static_cast<std::int64_t>(B);
  for (std::int64_t a = 1; a <= Bs; ++a) {
    SectionMemo memo(model, params);
    for_each_primitive_tuple(a, Bs, n, [&](const std::vector<std::int64_t>& x) {
      const PrimitivePoint P = make_point(a, x);
      memo.load(P);
      Rational h;
      if (exact) {
        h = memo.height(P);
        if (h > Tq) return;
      } else {
        const double hd = height(model, P, params);
        if (hd > T) return;
        h = exact_from_double(hd);
      }
      if (!memo.campana(P, S)) return;
      ++count;
      if (visit) visit(P, h);
    });
  }
  return count;
}

std::vector<std::vector<std::uint64_t>> enumerate_campana_profile(
    const std::vector<std::pair<OrbifoldModel, PlaceSet>>& configs, double T, std::uint64_t cap, unsigned threads) {
  if (configs.empty()) return {};
  const OrbifoldModel& base = configs.front().first;
  const auto& D = single_divisor(base);
  for (const auto& [model, S] : configs) {
    if (model.chart_dim() != base.chart_dim() || single_divisor(model).lambda != D.lambda) {
      throw std::invalid_argument("profile configurations must share the chart and L");
    }
  }
  const HeightParams params = HeightParams::from_model(base);
  if (!params.is_integral()) throw std::invalid_argument("height profile needs integral lambda");
  const std::uint64_t B = effective_height_bound(T, D.lambda);
  const auto Tmax = static_cast<std::uint64_t>(std::floor(T));
  std::vector<std::vector<std::uint64_t>> out(configs.size(), std::vector<std::uint64_t>(Tmax + 1, 0));
  if (B == 0) return out;
  const std::size_t n = base.chart_dim();
  check_cap(B, n, cap);

  // per-a histograms, summed in a order afterwards
  std::vector<std::vector<std::vector<std::uint64_t>>> partial(B);
  detail::parallel_for(B, threads, [&](std::size_t idx) {
    auto& hist = partial[idx];
    hist.assign(configs.size(), std::vector<std::uint64_t>(Tmax + 1, 0));
    const auto a = static_cast<std::int64_t>(idx + 1);
    SectionMemo memo(base, params);
    std::vector<SectionMemo> config_memos;
    config_memos.reserve(configs.size());
    for (const auto& cfg : configs) config_memos.emplace_back(cfg.first, params);
    for_each_primitive_tuple(a, static_cast<std::int64_t>(B), n, [&](const std::vector<std::int64_t>& x) {
      const PrimitivePoint P = make_point(a, x);
      memo.load(P);
      const Rational& h = memo.height(P);
      if (!h.is_integer() || h.numerator() > Tmax) return;
      const auto hi = static_cast<std::uint64_t>(h.numerator());
      for (std::size_t c = 0; c < configs.size(); ++c) {
        auto& cm = config_memos[c];
        cm.load(P);
        if (cm.campana(P, configs[c].second)) ++hist[c][hi];
      }
    });
  });
  for (const auto& hist : partial) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      for (std::size_t h = 0; h <= Tmax; ++h) out[c][h] += hist[c][h];
    }
  }
  return out;
}

BigInt count_fast(const OrbifoldModel& model, double T, const PlaceSet& S, unsigned threads) {
  const auto& D = single_divisor(model);
  const std::uint64_t B = effective_height_bound(T, D.lambda);
  if (B == 0) return BigInt(0);
  const auto n = static_cast<unsigned>(model.chart_dim());
  const std::vector<std::uint64_t> as = mfull_up_to(B, D.m, S);
  std::vector<BigInt> per_a(as.size());
  detail::parallel_for(as.size(), threads,
                       [&](std::size_t i) { per_a[i] = coprime_box_count(radical_primes(as[i]), B, n); });
  BigInt total = 0;
  for (const auto& v : per_a) total += v;
  return total;
}

double partial_zeta(const OrbifoldModel& model, double s, double T, const PlaceSet& S) {
  const auto& D = single_divisor(model);
  const std::uint64_t B = effective_height_bound(T, D.lambda);
  if (B == 0) return 0.0;
  const auto n = static_cast<unsigned>(model.chart_dim());
  const double ls = D.lambda.to_double() * s;
  double total = 0.0;
  for (std::uint64_t a : mfull_up_to(B, D.m, S)) {
    const auto rad = radical_primes(a);
    // points with max coordinate exactly h >= a
    BigInt below = a > 1 ? coprime_box_count(rad, a - 1, n) : BigInt(0);
    for (std::uint64_t h = a; h <= B; ++h) {
      const BigInt upto = coprime_box_count(rad, h, n);
      const BigInt exact = h == a ? upto : upto - below;
      total += exact.convert_to<double>() * std::pow(static_cast<double>(h), -ls);
      below = upto;
    }
  }
  return total;
}

FitResult fit_leading_constant(const std::vector<std::pair<double, double>>& pairs, double a_bar, unsigned b_bar) {
  if (pairs.size() < 3) throw std::invalid_argument("fit needs at least 3 (T, N) pairs");
  if (b_bar < 1) throw std::invalid_argument("b must be >= 1");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].first > 1)) throw std::invalid_argument("fit needs T > 1");
    if (i > 0 && !(pairs[i].first > pairs[i - 1].first)) throw std::invalid_argument("fit needs increasing T");
  }
  auto x_of = [&](double T) { return std::pow(T, a_bar) * std::pow(std::log(T), static_cast<double>(b_bar) - 1); };
  double sxy = 0, sxx = 0;
  for (const auto& [T, N] : pairs) {
    const double x = x_of(T);
    sxy += x * N;
    sxx += x * x;
  }
  if (!(sxx > 0) || !std::isfinite(sxx)) throw std::invalid_argument("degenerate fit");
  FitResult r;
  r.c_hat = sxy / sxx;
  for (const auto& [T, N] : pairs) r.residual = std::max(r.residual, std::abs(N / (r.c_hat * x_of(T)) - 1));
  return r;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("slope needs at least 2 pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [T, N] : pairs) {
    if (!(T > 0) || !(N > 0)) throw std::invalid_argument("slope needs positive T and N");
    const double x = std::log(T), y = std::log(N);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(pairs.size());
  const double den = k * sxx - sx * sx;
  if (!(std::abs(den) > 0)) throw std::invalid_argument("degenerate slope fit");
  return (k * sxy - sx * sy) / den;
}

nlohmann::json CountReport::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["m"] = m ? nlohmann::json(*m) : nlohmann::json("infinity");
  j["S"] = S.str();
  j["lambda"] = lambda.str();
  j["a"] = fmt12(a_bar.to_double());
  j["a_exact"] = a_bar.str();
  j[dlt ? "b_prime" : "b"] = b;
  j["c_bar"] = fmt12(c_bar);
  j["c_bar_tail"] = std::isfinite(c_bar_tail) ? nlohmann::json(fmt12(c_bar_tail)) : nlohmann::json(nullptr);
  j["tauberian"] = fmt12(tauberian);
  j["c_hat"] = fmt12(c_hat);
  j["fit_residual"] = fmt12(fit_residual);
  j["slope"] = fmt12(slope);
  j["rel_err"] = fmt12(rel_err);
  auto rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["T"] = fmt12(r.T);
    row["N"] = bigint_json(r.N);
    row["predicted"] = fmt12(r.predicted);
    row["fitted"] = fmt12(r.fitted);
    row["rel_err"] = fmt12(r.rel_err);
    if (r.seconds) row["seconds"] = fmt12(*r.seconds);
    rows_json.push_back(row);
  }
  j["rows"] = rows_json;
  return j;
}

std::string CountReport::to_csv() const {
  std::ostringstream os;
  os << "T,N,predicted,fitted,rel_err\n";
  for (const auto& r : rows) {
    os << str12(r.T) << ',' << r.N.str() << ',' << str12(r.predicted) << ',' << str12(r.fitted) << ','
       << str12(r.rel_err) << '\n';
  }
  return os.str();
}

CountReport verify_asymptotic(const OrbifoldModel& model, const PlaceSet& S, const std::vector<double>& grid,
                              const VerifyOptions& options) {
  const auto& D = single_divisor(model);
  std::vector<double> Ts = grid;
  std::sort(Ts.begin(), Ts.end());
  Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());

  CountReport rep;
  rep.model = model.name;
  rep.m = D.m;
  rep.S = S;
  rep.lambda = D.lambda;
  const LeadingConstant lc = leading_constant(model, S, options.prime_bound, options.threads);
  rep.a_bar = lc.invariants.a_bar;
  rep.b = lc.b;
  rep.dlt = lc.invariants.b_prime.has_value();
  rep.c_bar = lc.c_bar;
  rep.c_bar_tail = lc.tail_bound;
  rep.tauberian = lc.tauberian;

  const double a = rep.a_bar.to_double();
  auto x_of = [&](double T) { return std::pow(T, a) * std::pow(std::log(T), static_cast<double>(rep.b) - 1); };

  std::vector<std::pair<double, double>> pairs;
  for (double T : Ts) {
    CountRow row;
    row.T = T;
    const auto start = std::chrono::steady_clock::now();
    row.N = count_fast(model, T, S, options.threads);
    if (options.timings) {
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    row.predicted = rep.tauberian * x_of(T);
    row.rel_err = row.N.convert_to<double>() / row.predicted - 1;
    pairs.emplace_back(T, row.N.convert_to<double>());
    rep.rows.push_back(std::move(row));
  }
  if (pairs.size() >= 3) {
    const FitResult fit = fit_leading_constant(pairs, a, rep.b);
    rep.c_hat = fit.c_hat;
    rep.fit_residual = fit.residual;
    rep.slope = loglog_slope(pairs);
    rep.rel_err = rep.c_hat / rep.tauberian - 1;
    for (auto& row : rep.rows) row.fitted = rep.c_hat * x_of(row.T);
  }
  return rep;
}

}  // namespace campana
