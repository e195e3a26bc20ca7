#include "confgeo/rational_form.hpp"

#include "confgeo/errors.hpp"

namespace confgeo {

namespace {

bool is_one(const Polynomial& p) { return p.is_constant() && p.constant_value() == 1; }

// Splits an integer constant into numerator/denominator sign convention.
void fix_sign(Polynomial& num, Polynomial& den) {
  if (den.sign() < 0) {
    num = -num;
    den = -den;
  }
}

}  // namespace

RationalForm::RationalForm(const mpq_class& c)
    : num_(mpz_class(c.get_num())), den_(mpz_class(c.get_den())) {
  if (num_.is_zero()) den_ = Polynomial(1);
}

RationalForm RationalForm::fraction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw StructuralError("denominator is identically zero");
  if (num.is_zero()) return {};
  if (!is_one(den)) {
    const Polynomial g = gcd(num, den);
    if (!is_one(g)) {
      num = divide_exact(num, g);
      den = divide_exact(den, g);
    }
    fix_sign(num, den);
  }
  return RationalForm(std::move(num), std::move(den), true);
}

mpq_class RationalForm::constant_value() const {
  mpq_class r(num_.constant_value(), den_.constant_value());
  r.canonicalize();
  return r;
}

RationalForm RationalForm::operator-() const { return RationalForm(-num_, den_, true); }

RationalForm operator+(const RationalForm& a, const RationalForm& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    Polynomial t = a.num_ + b.num_;
    if (is_one(a.den_)) return RationalForm(std::move(t), a.den_, true);
    return RationalForm::fraction(std::move(t), a.den_);
  }
  // a/b + c/d with g = gcd(b, d): only gcd(t, g) can cancel.
  const Polynomial g = gcd(a.den_, b.den_);
  const Polynomial b1 = divide_exact(a.den_, g);
  const Polynomial d1 = divide_exact(b.den_, g);
  Polynomial t = a.num_ * d1 + b.num_ * b1;
  if (t.is_zero()) return {};
  Polynomial den = b1 * b.den_;
  if (!is_one(g)) {
    const Polynomial h = gcd(t, g);
    if (!is_one(h)) {
      t = divide_exact(t, h);
      den = divide_exact(den, h);
    }
  }
  fix_sign(t, den);
  return RationalForm(std::move(t), std::move(den), true);
}

RationalForm operator-(const RationalForm& a, const RationalForm& b) { return a + (-b); }

RationalForm operator*(const RationalForm& a, const RationalForm& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (is_one(a.den_) && is_one(b.den_)) return RationalForm(a.num_ * b.num_, a.den_, true);
  Polynomial n1 = a.num_, d1 = a.den_, n2 = b.num_, d2 = b.den_;
  if (!is_one(d2)) {
    const Polynomial g = gcd(n1, d2);
    if (!is_one(g)) {
      n1 = divide_exact(n1, g);
      d2 = divide_exact(d2, g);
    }
  }
  if (!is_one(d1)) {
    const Polynomial g = gcd(n2, d1);
    if (!is_one(g)) {
      n2 = divide_exact(n2, g);
      d1 = divide_exact(d1, g);
    }
  }
  Polynomial num = n1 * n2;
  Polynomial den = d1 * d2;
  fix_sign(num, den);
  return RationalForm(std::move(num), std::move(den), true);
}

RationalForm operator/(const RationalForm& a, const RationalForm& b) {
  if (b.is_zero()) throw StructuralError("division by identically zero expression");
  Polynomial n = b.den_, d = b.num_;
  fix_sign(n, d);
  return a * RationalForm(std::move(n), std::move(d), true);
}

RationalForm RationalForm::pow(int n) const {
  if (n == 0) return RationalForm(1);
  if (n < 0) {
    if (is_zero()) throw StructuralError("negative power of identically zero expression");
    Polynomial num = den_.pow(static_cast<unsigned>(-n));
    Polynomial den = num_.pow(static_cast<unsigned>(-n));
    fix_sign(num, den);
    return RationalForm(std::move(num), std::move(den), true);
  }
  // Coprime stays coprime under powers.
  return RationalForm(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)), true);
}

mpq_class RationalForm::evaluate(std::span<const mpq_class> slots) const {
  const mpq_class d = den_.evaluate(slots);
  if (d == 0) throw PoleError(to_string());
  return num_.evaluate(slots) / d;
}

double RationalForm::evaluate(std::span<const double> slots) const {
  return num_.evaluate(slots) / den_.evaluate(slots);
}

std::string RationalForm::to_string() const {
  if (is_one(den_)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalForm partial(const RationalForm& f, VarId v) {
  const int s = v.slot();
  const Polynomial dn = f.numerator().partial(s);
  const Polynomial dd = f.denominator().partial(s);
  if (dd.is_zero()) {
    if (dn.is_zero()) return {};
    return RationalForm::fraction(dn, f.denominator());
  }
  // (n'd - n d') / d^2. A common factor of the result and d must divide d'
  // because n and d are coprime, so reduce against gcd(d, d') first.
  const Polynomial& d = f.denominator();
  const Polynomial g = gcd(d, dd);
  const Polynomial d1 = divide_exact(d, g);   // d = g * d1
  const Polynomial dd1 = divide_exact(dd, g);  // d' = g * dd1
  // (n'd - n d')/d^2 = (n' d1 - n dd1) / (d1 * d)
  Polynomial num = dn * d1 - f.numerator() * dd1;
  return RationalForm::fraction(std::move(num), d1 * d);
}

}  // namespace confgeo
