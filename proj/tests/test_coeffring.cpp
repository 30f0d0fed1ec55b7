#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "pdm/coeffring.hpp"

using namespace pdm;

namespace {

CoeffPoly random_coeff(std::mt19937& rng, int max_terms = 3) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> da(-2, 2), db(0, 2), dc(0, 3), dd(0, 2);
  std::uniform_int_distribution<int> num(-4, 4), qp(0, 2), kp(0, 1);
  CoeffPoly p;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    ScalarPoly s = ScalarPoly::monomial({qp(rng), kp(rng)}, Rational(num(rng)));
    p += CoeffPoly::normalize({{TrigKey{da(rng), db(rng), dc(rng), dd(rng)}, s}});
  }
  return p;
}

}  // namespace

TEST_CASE("normalize reduces cosh and cos squares") {
  // cosh^2 -> 1 + sinh^2
  auto c2 = CoeffPoly::normalize({{TrigKey{0, 2, 0, 0}, sp_const(1)}});
  REQUIRE(c2 == CoeffPoly::one() + CoeffPoly::mono(2, 0, 0, 0));

  // cos^2 -> 1 - sin^2
  auto d2 = CoeffPoly::normalize({{TrigKey{0, 0, 0, 2}, sp_const(1)}});
  REQUIRE(d2 == CoeffPoly::one() - CoeffPoly::mono(0, 0, 2, 0));

  // csch^2 * cosh^3 -> csch^2 cosh + cosh
  auto m = CoeffPoly::normalize({{TrigKey{-2, 3, 0, 0}, sp_const(1)}});
  REQUIRE(m == CoeffPoly::mono(-2, 1, 0, 0) + CoeffPoly::mono(0, 1, 0, 0));
}

TEST_CASE("normalize is idempotent and rejects non-ring inputs") {
  std::mt19937 rng(42);
  for (int i = 0; i < 50; ++i) {
    CoeffPoly p = random_coeff(rng);
    std::vector<RawMonomial> raw;
    for (const auto& [k, s] : p.terms()) raw.push_back({k, s});
    REQUIRE(CoeffPoly::normalize(raw) == p);
  }
  REQUIRE_THROWS_AS(CoeffPoly::mono(0, -1, 0, 0), InvalidParam);
  REQUIRE_THROWS_AS(CoeffPoly::mono(0, 0, -1, 0), InvalidParam);
  REQUIRE_THROWS_AS(CoeffPoly::mono(0, 0, 0, -2), InvalidParam);
}

TEST_CASE("derivatives of the ring generators") {
  const ScalarPoly q = sp_q();

  // d/dx sinh = q cosh
  REQUIRE(CoeffPoly::mono(1, 0, 0, 0).derive_x() == CoeffPoly::mono(0, 1, 0, 0) * q);

  // d/dx csch = -q cosh csch^2
  REQUIRE(CoeffPoly::mono(-1, 0, 0, 0).derive_x() ==
          CoeffPoly::mono(-2, 1, 0, 0) * (-q));

  // d/dy (sin cos) = q (1 - 2 sin^2)
  auto sc = CoeffPoly::mono(0, 0, 1, 1);
  REQUIRE(sc.derive_y() ==
          (CoeffPoly::one() - CoeffPoly::mono(0, 0, 2, 0) * Rational(2)) * q);
}

TEST_CASE("Leibniz rule holds exactly") {
  std::mt19937 rng(7);
  for (int i = 0; i < 40; ++i) {
    CoeffPoly f = random_coeff(rng), g = random_coeff(rng);
    REQUIRE((f * g).derive_x() == f.derive_x() * g + f * g.derive_x());
    REQUIRE((f * g).derive_y() == f.derive_y() * g + f * g.derive_y());
  }
}

TEST_CASE("partial derivatives commute") {
  std::mt19937 rng(11);
  for (int i = 0; i < 40; ++i) {
    CoeffPoly f = random_coeff(rng);
    REQUIRE(f.derive_x().derive_y() == f.derive_y().derive_x());
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(13);
  for (int i = 0; i < 30; ++i) {
    CoeffPoly f = random_coeff(rng), g = random_coeff(rng), h = random_coeff(rng);
    REQUIRE(f + g == g + f);
    REQUIRE(f * g == g * f);
    REQUIRE((f + g) + h == f + (g + h));
    REQUIRE((f * g) * h == f * (g * h));
    REQUIRE(f * (g + h) == f * g + f * h);
  }
}

TEST_CASE("shift_k acts on scalars only") {
  auto veff_barrier = CoeffPoly::mono(-2, 0, 0, 0, sp_q(2) * sp_k() * (sp_k() - sp_const(1)));
  auto shifted = veff_barrier.shift_k(1);
  REQUIRE(shifted ==
          CoeffPoly::mono(-2, 0, 0, 0, sp_q(2) * sp_k() * (sp_k() + sp_const(1))));
  REQUIRE(shifted.shift_k(-1) == veff_barrier);
}

TEST_CASE("eval agrees with direct floating-point evaluation") {
  // csch^2 at q=1, x=1
  auto csch2 = CoeffPoly::mono(-2, 0, 0, 0);
  double expected = 1.0 / (std::sinh(1.0) * std::sinh(1.0));
  REQUIRE(csch2.eval(1.0, 1.0, 1.0, 0.3) == Approx(expected).epsilon(1e-14));
  REQUIRE(expected == Approx(0.72406166096631064).epsilon(1e-15));

  REQUIRE(CoeffPoly::one().eval(2.0, 3.0, 0.5, -0.2) == 1.0);

  auto sin1 = CoeffPoly::mono(0, 0, 1, 0);
  REQUIRE(sin1.eval(1.0, 1.0, 0.7, std::numbers::pi / 2) == Approx(1.0));

  REQUIRE_THROWS_AS(csch2.eval(1.0, 1.0, 0.0, 0.1), PoleAtOrigin);
}

TEST_CASE("structural equality is consistent with eval") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uq(0.5, 2.0), ux(0.2, 2.5), uy(-1.2, 1.2);
  for (int i = 0; i < 10; ++i) {
    CoeffPoly f = random_coeff(rng), g = random_coeff(rng);
    CoeffPoly lhs = (f + g) * (f - g);
    CoeffPoly rhs = f * f - g * g;
    REQUIRE(lhs == rhs);
    for (int p = 0; p < 5; ++p) {
      double q = uq(rng), k = uq(rng), x = ux(rng), y = uy(rng);
      double a = lhs.eval(q, k, x, y), b = rhs.eval(q, k, x, y);
      REQUIRE(a == Approx(b).margin(1e-12 * (1.0 + std::abs(a))));
    }
  }
}

TEST_CASE("debug printing follows the ASCII grammar") {
  auto m = CoeffPoly::mono(-2, 1, 0, 0, sp_q(2) * sp_const(3));
  REQUIRE(m.str() == "(3 q^2) sinh^-2 cosh");
  REQUIRE(CoeffPoly::zero().str() == "0");
}
