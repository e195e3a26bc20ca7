#include "doctest.h"

#include <cmath>
#include <random>

#include "confgeo/errors.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/oracle.hpp"
#include "confgeo/parser.hpp"
#include "test_support.hpp"

using namespace confgeo;
using namespace confgeo::testing;

namespace {

Expr v(VarId id) { return Expr::variable(id); }

bool same_system(const OdeSystem& a, const OdeSystem& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    if (normalize(a.rhs(i)) != normalize(b.rhs(i))) return false;
  }
  return true;
}

mpq_class small_rational(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, 4);
  mpq_class r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

/// Random well-conditioned change: A = I + small perturbation, lambda in [1/2, 2].
AffineChange random_change(std::mt19937_64& rng, int m) {
  for (;;) {
    RationalMatrix a(m, std::vector<mpq_class>(m));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) a[i][j] = (i == j ? 1 : 0) + small_rational(rng, -2, 2) / 4;
    }
    if (determinant(a) == 0) continue;
    std::uniform_int_distribution<int> lam(2, 8);
    std::vector<mpq_class> b;
    for (int i = 0; i < m; ++i) b.push_back(small_rational(rng, -2, 2));
    return AffineChange(a, mpq_class(lam(rng), 4), small_rational(rng, -2, 2), b);
  }
}

std::vector<OdeSystem> corpus_systems() {
  std::vector<OdeSystem> out;
  for (const char* name : {"circle_m2.ode", "circle_m3.ode", "zero_m2.ode", "linear_p_m2.ode", "cubic_m2.ode"}) {
    out.push_back(read_system_file(corpus_path(name)).system);
  }
  return out;
}

}  // namespace

TEST_CASE("OdeSystem validation") {
  CHECK_THROWS_AS(OdeSystem(1, {Expr()}), StructuralError);
  CHECK_THROWS_AS(OdeSystem(2, {Expr()}), StructuralError);
  CHECK_THROWS_AS(OdeSystem(2, {v(VarId::q(3)), Expr()}), StructuralError);
  CHECK_NOTHROW(OdeSystem(2, {v(VarId::q(2)), v(VarId::x())}));
}

TEST_CASE("total derivative examples") {
  const OdeSystem circle = circle_system(2);
  CHECK(is_zero(total_derivative(circle, v(VarId::y(1))) - v(VarId::p(1))));
  CHECK(is_zero(total_derivative(circle, v(VarId::q(1))) - circle.rhs(0)));

  const OdeSystem flat = zero_system(2);
  const Expr x = v(VarId::x());
  const Expr d = total_derivative(flat, x * v(VarId::p(1)));
  CHECK(is_zero(d - (v(VarId::p(1)) + x * v(VarId::q(1)))));
}

TEST_CASE("total derivative lifts y -> p -> q -> f on the corpus") {
  for (const auto& sys : corpus_systems()) {
    DerivativeCache cache;
    for (int i = 1; i <= sys.dim(); ++i) {
      CHECK(is_zero(total_derivative(sys, v(VarId::y(i)), cache) - v(VarId::p(i))));
      CHECK(is_zero(total_derivative(sys, v(VarId::p(i)), cache) - v(VarId::q(i))));
      CHECK(is_zero(total_derivative(sys, v(VarId::q(i)), cache) - sys.rhs(i - 1)));
    }
  }
}

TEST_CASE("property: total derivative is a derivation") {
  const OdeSystem sys = circle_system(2);
  std::mt19937_64 rng(23);
  for (int n = 0; n < 100; ++n) {
    const Expr a = random_expr(rng, 2, 3);
    const Expr b = random_expr(rng, 2, 3);
    const Expr r = total_derivative(sys, a * b) - a * total_derivative(sys, b) - b * total_derivative(sys, a);
    CHECK(is_zero(r));
  }
}

TEST_CASE("rational matrices") {
  const RationalMatrix a{{2, 1}, {mpq_class(1, 2), 3}};
  CHECK(determinant(a) == mpq_class(11, 2));
  const RationalMatrix inv = inverse(a);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      mpq_class s = 0;
      for (int k = 0; k < 2; ++k) s += a[i][k] * inv[k][j];
      CHECK(s == (i == j ? 1 : 0));
    }
  }
  CHECK_THROWS_AS(inverse({{1, 2}, {2, 4}}), std::domain_error);
}

TEST_CASE("AffineChange validation") {
  CHECK_THROWS_AS(AffineChange({{1, 2}, {2, 4}}, 1, 0, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AffineChange({{1, 0}, {0, 1}}, 0, 0, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AffineChange({{1, 0}, {0, 1}}, 1, 0, {0}), std::invalid_argument);
}

TEST_CASE("affine transform examples") {
  const OdeSystem circle = circle_system(2);
  CHECK(same_system(affine_transform(circle, AffineChange::identity(2)), circle));

  std::mt19937_64 rng(29);
  for (int n = 0; n < 5; ++n) {
    const OdeSystem t = affine_transform(zero_system(3), random_change(rng, 3));
    for (const auto& f : t.rhs()) CHECK(f.is_constant(0));
  }

  // Pure scaling x -> 2x: y''' picks up 1/8.
  const OdeSystem cubic = system_of(2, {"q2^3", "0"});
  const OdeSystem scaled = affine_transform(cubic, AffineChange({{1, 0}, {0, 1}}, 2, 0, {0, 0}));
  CHECK(is_zero(scaled.rhs(0) - parse_expression("8*q2^3", 2)));
}

TEST_CASE("property: affine transforms compose") {
  std::mt19937_64 rng(31);
  const std::vector<OdeSystem> systems{circle_system(2), system_of(2, {"x*p2 + y1*q2/2", "p1*q1 - y2"})};
  for (const auto& sys : systems) {
    for (int n = 0; n < 5; ++n) {
      const AffineChange c1 = random_change(rng, 2);
      const AffineChange c2 = random_change(rng, 2);
      CHECK(same_system(affine_transform(affine_transform(sys, c1), c2), affine_transform(sys, c2.after(c1))));
    }
  }
}

TEST_CASE("property: solutions are transported by the change") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> init(-0.5, 0.5);
  const std::vector<OdeSystem> systems{circle_system(2), system_of(2, {"x*p2 + y1*q2/2", "p1*q1 - y2"})};
  for (const auto& sys : systems) {
    const int m = sys.dim();
    int trials = 0;
    while (trials < 20) {
      const AffineChange ch = random_change(rng, m);
      const OdeSystem image = affine_transform(sys, ch);
      std::vector<double> state(3 * m);
      for (auto& s : state) s = init(rng);
      const int intervals = 50;
      const auto base = integrate(numeric_rhs(sys), m, 0.0, state, 1.0, intervals);
      REQUIRE(base);

      std::vector<double> slots(kSlotCount, 0.0);
      for (int i = 1; i <= m; ++i) {
        slots[VarId::y(i).slot()] = state[i - 1];
        slots[VarId::p(i).slot()] = state[m + i - 1];
        slots[VarId::q(i).slot()] = state[2 * m + i - 1];
      }
      const auto mapped = ch.map_point(slots);
      std::vector<double> image_state(3 * m);
      for (int i = 1; i <= m; ++i) {
        image_state[i - 1] = mapped[VarId::y(i).slot()];
        image_state[m + i - 1] = mapped[VarId::p(i).slot()];
        image_state[2 * m + i - 1] = mapped[VarId::q(i).slot()];
      }
      const auto moved = integrate(numeric_rhs(image), m, mapped[0], image_state, ch.lambda().get_d(), intervals);
      REQUIRE(moved);

      double deviation = 0;
      for (int n = 0; n <= intervals; ++n) {
        for (int i = 0; i < m; ++i) {
          double y = ch.shift_y()[i].get_d();
          for (int j = 0; j < m; ++j) y += ch.matrix()[i][j].get_d() * base->state[n][j];
          deviation = std::max(deviation, std::abs(y - moved->state[n][i]));
        }
      }
      CHECK(deviation < 1e-6);
      ++trials;
    }
  }
}
