#include <random>

#include "campana/orbifold.hpp"
#include "doctest.h"

using namespace campana;

namespace {

PrimitivePoint pt(std::vector<BigInt> v) { return PrimitivePoint(std::move(v)); }

PrimitivePoint random_group_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long long> a(1, 2000), x(-3000, 3000);
  for (;;) {
    std::vector<BigInt> v{BigInt(a(rng))};
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(x(rng));
    BigInt g = 0;
    for (const auto& c : v) g = boost::multiprecision::gcd(g, c);
    if (g == 1) return pt(v);
  }
}

}  // namespace

TEST_CASE("built-in model metadata") {
  const auto P3 = builtin_model("p3-heisenberg", 2);
  REQUIRE(P3.divisors.size() == 1);
  CHECK(P3.divisors[0].kappa == 4);
  CHECK(P3.divisors[0].epsilon() == Rational(1, 2));
  CHECK(P3.bad_primes.empty());
  CHECK(builtin_model("p2-unipotent", 1).divisors[0].kappa == 3);
  CHECK(builtin_model("p1-vector", 1).divisors[0].kappa == 2);
  CHECK(builtin_model("p3-heisenberg", std::nullopt).divisors[0].lambda == Rational(3));
  CHECK(builtin_model("p3-heisenberg", std::nullopt).divisors[0].epsilon() == Rational(1));
  CHECK_THROWS_AS(builtin_model("p4", 1), std::invalid_argument);
  CHECK_THROWS_WITH(builtin_model("p3-heisenberg", 1, Rational(-1)), "L not in effective-cone interior");
  const auto Y = builtin_model("p2-unipotent", 2);
  REQUIRE(Y.ambient.has_value());
  CHECK(Y.ambient->include(pt({3, 1, 2})) == pt({3, 0, 1, 2}));
}

TEST_CASE("intersection_multiplicity examples") {
  const auto P3 = builtin_model("p3-heisenberg", 2);
  CHECK(intersection_multiplicity(P3, pt({4, 1, 1, 1}), "D", 2) == 2);
  for (std::uint64_t p : {2, 3, 5, 7}) CHECK(intersection_multiplicity(P3, pt({1, 5, 7, 9}), "D", p) == 0);
  CHECK(intersection_multiplicity(P3, pt({9, 2, 1, 1}), "D", 3) == 2);
  CHECK(intersection_multiplicity(P3, pt({9, 2, 1, 1}), "D", 2) == 0);
  CHECK_THROWS_WITH(intersection_multiplicity(P3, pt({0, 1, 1, 1}), "D", 2), "point lies in boundary");
  CHECK_THROWS_AS(intersection_multiplicity(P3, pt({1, 1, 1, 1}), "E", 2), std::invalid_argument);
}

TEST_CASE("is_campana examples") {
  const auto m2 = builtin_model("p3-heisenberg", 2);
  CHECK(is_campana(m2, pt({4, 1, 1, 1}), {}));
  CHECK_FALSE(is_campana(m2, pt({2, 1, 1, 1}), {}));
  CHECK(is_campana(m2, pt({2, 1, 1, 1}), PlaceSet::parse("inf,2")));
  CHECK(is_campana(builtin_model("p3-heisenberg", 1), pt({6, 1, 1, 1}), {}));
  const auto integral = builtin_model("p3-heisenberg", std::nullopt);
  CHECK(is_campana(integral, pt({1, 5, 1, 1}), {}));
  CHECK_FALSE(is_campana(integral, pt({4, 1, 1, 1}), {}));
  CHECK(is_campana(integral, pt({4, 1, 1, 1}), PlaceSet::parse("2")));
  CHECK_THROWS_WITH(is_campana(m2, pt({0, 1, 0, 0}), {}), "point lies in boundary");
}

TEST_CASE("is_campana matches is_mfull of the first coordinate; monotone in S") {
  std::mt19937_64 rng(21);
  const PlaceSet S0{}, S1 = PlaceSet::parse("inf,2"), S2 = PlaceSet::parse("inf,2,3");
  for (unsigned m : {1u, 2u, 3u}) {
    const auto model = builtin_model("p3-heisenberg", m);
    for (int i = 0; i < 10000 / 3; ++i) {
      const PrimitivePoint P = random_group_point(rng, 3);
      const auto a = static_cast<std::uint64_t>(P[0]);
      for (const PlaceSet* S : {&S0, &S1, &S2}) CHECK(is_campana(model, P, *S) == is_mfull(a, m, *S));
      if (is_campana(model, P, S0)) CHECK(is_campana(model, P, S1));
      if (is_campana(model, P, S1)) CHECK(is_campana(model, P, S2));
    }
  }
}

TEST_CASE("is_campana factors through projective scaling") {
  const auto model = builtin_model("p3-heisenberg", 2);
  const std::vector<Rational> v{Rational(8), Rational(3), Rational(5), Rational(7)};
  for (const Rational c : {Rational(2, 3), Rational(-5), Rational(7, 4)}) {
    std::vector<Rational> w;
    for (const auto& x : v) w.push_back(c * x);
    CHECK(is_campana(model, primitive_rep(w), {}) == is_campana(model, primitive_rep(v), {}));
  }
}

TEST_CASE("predict_invariants examples") {
  auto inv = predict_invariants(builtin_model("p3-heisenberg", 2), {});
  CHECK(inv.a_bar == Rational(7, 2));
  CHECK(inv.b_bar == 1);
  CHECK_FALSE(inv.b_prime.has_value());
  CHECK(inv.A_eps == std::vector<DivisorId>{"D"});

  inv = predict_invariants(builtin_model("p3-heisenberg", 1), {});
  CHECK(inv.a_bar == Rational(4));
  CHECK(inv.b_bar == 1);

  inv = predict_invariants(builtin_model("p3-heisenberg", std::nullopt, Rational(3)), {});
  CHECK(inv.a_bar == Rational(1));
  REQUIRE(inv.b_prime.has_value());
  CHECK(*inv.b_prime == 1);
  inv = predict_invariants(builtin_model("p3-heisenberg", std::nullopt, Rational(3)), PlaceSet::parse("inf,2"));
  CHECK(*inv.b_prime == 2);

  // not L = -(K + D): no b'
  CHECK_FALSE(predict_invariants(builtin_model("p3-heisenberg", std::nullopt, Rational(1)), {}).b_prime);

  OrbifoldModel bad = builtin_model("p3-heisenberg", 2);
  bad.divisors[0].lambda = Rational(0);
  CHECK_THROWS_WITH(predict_invariants(bad, {}), "L not in effective-cone interior");
}

TEST_CASE("a_bar scales inversely with L") {
  for (const Rational c : {Rational(2), Rational(1, 3), Rational(5, 2)}) {
    const auto base = predict_invariants(builtin_model("p3-heisenberg", 2), {});
    const auto scaled = predict_invariants(builtin_model("p3-heisenberg", 2, c), {});
    CHECK(scaled.a_bar == base.a_bar / c);
    CHECK(scaled.A_eps == base.A_eps);
  }
}

TEST_CASE("stratum partition") {
  for (const auto& name : builtin_model_names()) {
    const auto model = builtin_model(name, 2);
    const unsigned n = static_cast<unsigned>(model.ambient_dim);
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
      BigInt sum = 0;
      for (StratumKey B = 0; B <= model.full_key(); ++B) sum += model.stratum_enumerator(B, p);
      const BigInt projective = (boost::multiprecision::pow(BigInt(p), n + 1) - 1) / (p - 1);
      CHECK(sum == projective);
      CHECK(count_fp_points(model, p) == projective);
    }
  }
}
