#pragma once

#include <gmpxx.h>

#include <span>
#include <string>

#include "confgeo/polynomial.hpp"
#include "confgeo/variable.hpp"

namespace confgeo {

/// Canonical rational function numerator / denominator.
///
/// Invariants: gcd(numerator, denominator) is 1 (integer content included),
/// the denominator's leading coefficient is positive, and zero is (0, 1).
/// Two rational functions are equal iff their forms are bit-identical.
class RationalForm {
 public:
  RationalForm() : den_(1) {}
  RationalForm(long c) : num_(c), den_(1) {}  // NOLINT: constants convert implicitly
  RationalForm(const mpq_class& c);            // NOLINT
  explicit RationalForm(Polynomial p) : num_(std::move(p)), den_(1) {}
  static RationalForm variable(VarId v) { return RationalForm(Polynomial::variable(v)); }
  /// Reduces num / den; throws StructuralError if den is zero.
  static RationalForm fraction(Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  mpq_class constant_value() const;
  /// Bitmask of slots occurring in numerator or denominator.
  std::uint32_t support() const { return num_.support() | den_.support(); }

  RationalForm operator-() const;
  friend RationalForm operator+(const RationalForm& a, const RationalForm& b);
  friend RationalForm operator-(const RationalForm& a, const RationalForm& b);
  friend RationalForm operator*(const RationalForm& a, const RationalForm& b);
  friend RationalForm operator/(const RationalForm& a, const RationalForm& b);
  RationalForm& operator+=(const RationalForm& b) { return *this = *this + b; }
  RationalForm& operator-=(const RationalForm& b) { return *this = *this - b; }
  RationalForm& operator*=(const RationalForm& b) { return *this = *this * b; }
  RationalForm& operator/=(const RationalForm& b) { return *this = *this / b; }
  RationalForm pow(int n) const;

  /// Exact value; throws PoleError if the denominator vanishes.
  mpq_class evaluate(std::span<const mpq_class> slots) const;
  double evaluate(std::span<const double> slots) const;

  /// "num" or "(num)/(den)".
  std::string to_string() const;

  friend bool operator==(const RationalForm&, const RationalForm&) = default;

 private:
  RationalForm(Polynomial num, Polynomial den, bool) : num_(std::move(num)), den_(std::move(den)) {}

  Polynomial num_;
  Polynomial den_;
};

RationalForm partial(const RationalForm& f, VarId v);

}  // namespace confgeo
