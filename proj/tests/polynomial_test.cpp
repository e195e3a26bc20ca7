#include "doctest.h"

#include <random>

#include "confgeo/polynomial.hpp"
#include "confgeo/rational_form.hpp"
#include "test_support.hpp"

using namespace confgeo;
using confgeo::testing::var;

TEST_CASE("graded lexicographic order puts q above p above y above x") {
  const auto x = Monomial::power(VarId::x().slot(), 1);
  const auto y1 = Monomial::power(VarId::y(1).slot(), 1);
  const auto p1 = Monomial::power(VarId::p(1).slot(), 1);
  const auto q2 = Monomial::power(VarId::q(2).slot(), 1);
  const auto q1 = Monomial::power(VarId::q(1).slot(), 1);
  CHECK(x < y1);
  CHECK(y1 < p1);
  CHECK(p1 < q1);
  CHECK(q1 < q2);
  CHECK(q2 < x * x);  // degree first
  CHECK(x * q1 < x * q2);
  CHECK(min(x * x * q1, x * q1 * q1) == x * q1);
  CHECK((x * q1).divides(x * x * q1));
  CHECK_FALSE((q1 * q1).divides(x * q1));
}

TEST_CASE("like terms collect and cancel") {
  const auto p1 = var(VarId::p(1));
  const auto q2 = var(VarId::q(2));
  CHECK((p1 + p1) == p1 * mpz_class(2));
  CHECK((p1 * q2 - q2 * p1).is_zero());
  CHECK(((p1 + q2) * (p1 - q2)) == p1 * p1 - q2 * q2);
  CHECK((p1 + Polynomial(1)).pow(3).size() == 4);
}

TEST_CASE("exact division") {
  const auto a = var(VarId::p(1)) + var(VarId::q(1)) * mpz_class(3) + Polynomial(2);
  const auto b = var(VarId::x()) * var(VarId::y(2)) - Polynomial(5);
  auto q = try_divide(a * b, b);
  REQUIRE(q);
  CHECK(*q == a);
  CHECK_FALSE(try_divide(a * b + Polynomial(1), b));
  CHECK_FALSE(try_divide(a, a * mpz_class(2)));
  CHECK_THROWS(divide_exact(a, b));
}

TEST_CASE("gcd of small cases") {
  const auto q1 = var(VarId::q(1));
  const auto one = Polynomial(1);
  CHECK(gcd(q1 * q1 - one, q1 - one) == q1 - one);
  CHECK(gcd(Polynomial(6), Polynomial(-4)) == Polynomial(2));
  CHECK(gcd(q1 * mpz_class(6), q1 * q1 * mpz_class(4)) == q1 * mpz_class(2));
  CHECK(gcd(Polynomial(), q1 * mpz_class(-3)) == q1 * mpz_class(3));
  const auto s = one + var(VarId::p(1)) * var(VarId::p(1)) + var(VarId::p(2)) * var(VarId::p(2));
  CHECK(gcd(s.pow(4), s.pow(2) * (q1 + var(VarId::p(1)))) == s.pow(2));
}

TEST_CASE("gcd recovers a planted common factor") {
  std::mt19937_64 rng(7);
  const std::vector<VarId> vars{VarId::x(), VarId::p(1), VarId::p(2), VarId::q(1)};
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = confgeo::testing::random_polynomial(rng, vars, 3, 2);
    const auto a = confgeo::testing::random_polynomial(rng, vars, 4, 3);
    const auto b = confgeo::testing::random_polynomial(rng, vars, 4, 3);
    if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
    const auto h = gcd(a * g, b * g);
    INFO("g = " << g.to_string() << ", a = " << a.to_string() << ", b = " << b.to_string());
    CHECK(try_divide(h, g));
    CHECK(try_divide(a * g, h));
    CHECK(try_divide(b * g, h));
    // Cofactors are coprime.
    const auto ca = divide_exact(a * g, h);
    const auto cb = divide_exact(b * g, h);
    CHECK(gcd(ca, cb).is_constant());
  }
}

TEST_CASE("rational forms are canonical") {
  const auto q1 = RationalForm::variable(VarId::q(1));
  const auto p1 = RationalForm::variable(VarId::p(1));
  CHECK((q1 * q1 - 1) / (q1 - 1) == q1 + 1);
  CHECK((p1 + p1) == 2 * p1);
  const auto r = (1 + p1 * p1) * (1 / (1 + p1 * p1)) - 1;
  CHECK(r.is_zero());
  CHECK(r.denominator() == Polynomial(1));
  const auto neg = RationalForm(1L) / (-1 - p1);
  CHECK(neg.denominator().leading().coef > 0);
  CHECK(neg == -(1 / (1 + p1)));
  CHECK((q1 / 2).denominator() == Polynomial(2));
}
