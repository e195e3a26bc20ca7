#include "confgeo/invariants.hpp"

#include <map>

namespace confgeo {

HFields h_fields(const OdeSystem& sys) {
  auto a = exact_analysis(sys);
  return {to_expr_field(a->hx()), to_expr_field(a->hm1())};
}

TensorField<Expr> trace_free_sym3(const TensorField<Expr>& t) {
  return trace_free_sym3(t, [](const Expr& a, const Expr& b) { return is_zero(a - b); });
}

TensorField<Expr> invariant_I2(const OdeSystem& sys) { return to_expr_field(exact_analysis(sys)->i2()); }

TensorField<Expr> invariant_W2(const OdeSystem& sys) { return to_expr_field(exact_analysis(sys)->w2()); }

TensorField<Expr> invariant_W3(const OdeSystem& sys, CubeMode cube) {
  return to_expr_field(exact_analysis(sys)->w3(cube));
}

TensorField<Expr> invariant_I4(const OdeSystem& sys, I4Variant variant, Hm2Reading reading) {
  return to_expr_field(exact_analysis(sys)->i4(variant, reading));
}

namespace {

constexpr std::uint32_t q_mask() {
  std::uint32_t mask = 0;
  for (int i = 1; i <= kMaxDimension; ++i) mask |= 1u << (2 * kMaxDimension + i);
  return mask;
}

// Coefficients of f in the q variables, keyed by the q-part of the monomial.
// Nullopt if the denominator depends on q.
std::optional<std::map<Monomial, RationalForm>> q_coefficients(const RationalForm& f) {
  if (f.denominator().support() & q_mask()) return std::nullopt;
  std::map<Monomial, std::vector<Term>> groups;
  for (const auto& t : f.numerator().terms()) {
    Monomial key;
    Monomial rest = t.mono;
    for (int i = 1; i <= kMaxDimension; ++i) {
      const int s = VarId::q(i).slot();
      const unsigned e = t.mono.exponent(s);
      if (e == 0) continue;
      key = key.with_exponent(s, e);
      rest = rest.with_exponent(s, 0);
    }
    groups[key].push_back({rest, t.coef});
  }
  std::map<Monomial, RationalForm> out;
  for (auto& [key, terms] : groups) {
    out.emplace(key, RationalForm::fraction(Polynomial::from_terms(std::move(terms)), f.denominator()));
  }
  return out;
}

Monomial q_monomial(int a, int b) {  // q_a q_b, 1-based
  Monomial m = Monomial::power(VarId::q(a).slot(), 1);
  const int s = VarId::q(b).slot();
  return m.with_exponent(s, m.exponent(s) + 1);
}

}  // namespace

std::optional<QuadraticFormDecomposition> match_I2_zero_form(const OdeSystem& sys) {
  const int m = sys.dim();
  std::vector<std::map<Monomial, RationalForm>> coeffs;
  for (const auto& f : sys.rhs()) {
    auto c = q_coefficients(normalize(f));
    if (!c) return std::nullopt;
    for (const auto& [key, value] : *c) {
      if (key.degree() > 2) return std::nullopt;
    }
    coeffs.push_back(std::move(*c));
  }
  auto coef = [&](int i, const Monomial& key) {
    auto it = coeffs[i].find(key);
    return it == coeffs[i].end() ? RationalForm() : it->second;
  };

  // A_j from the q_j^2 coefficient of f^j, then every quadratic coefficient
  // of every equation must match 3 q_i sum_j A_j q_j.
  std::vector<RationalForm> a(m);
  for (int j = 0; j < m; ++j) a[j] = coef(j, q_monomial(j + 1, j + 1)) / RationalForm(3L);
  for (int i = 0; i < m; ++i) {
    for (int x = 0; x < m; ++x) {
      for (int y = x; y < m; ++y) {
        RationalForm expected;
        if (x == i && y == i) {
          expected = RationalForm(3L) * a[i];
        } else if (x == i) {
          expected = RationalForm(3L) * a[y];
        } else if (y == i) {
          expected = RationalForm(3L) * a[x];
        }
        if (!(coef(i, q_monomial(x + 1, y + 1)) == expected)) return std::nullopt;
      }
    }
  }

  QuadraticFormDecomposition d{TensorField<Expr>(Shape::Vector, m), TensorField<Expr>(Shape::Matrix, m),
                               TensorField<Expr>(Shape::Vector, m)};
  for (int i = 0; i < m; ++i) {
    d.a(i) = to_expr(a[i]);
    d.c(i) = to_expr(coef(i, Monomial{}));
    for (int j = 0; j < m; ++j) d.b(i, j) = to_expr(coef(i, Monomial::power(VarId::q(j + 1).slot(), 1)));
  }
  return d;
}

}  // namespace confgeo
