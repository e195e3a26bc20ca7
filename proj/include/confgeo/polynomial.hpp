#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confgeo/variable.hpp"

namespace confgeo {

/// Exponent vector over the fixed jet slots.
///
/// Exponents are packed as 16-bit lanes, four per word; lane 31 holds the
/// total degree. Comparing the words from the top down therefore compares
/// total degree first and then exponents from q10 down to x, which is the
/// graded-lexicographic order with x < y1 < ... < p1 < ... < q1 < ... .
class Monomial {
 public:
  static constexpr unsigned kMaxExponent = 0x7fff;

  Monomial() = default;
  static Monomial power(int slot, unsigned exponent);

  unsigned exponent(int slot) const {
    return static_cast<unsigned>((words_[slot / 4] >> (16 * (slot % 4))) & 0xffffu);
  }
  unsigned degree() const { return exponent(kDegreeLane); }
  bool is_one() const { return degree() == 0; }
  /// Bit i set iff slot i has a nonzero exponent.
  std::uint32_t support() const;

  bool divides(const Monomial& other) const;
  Monomial with_exponent(int slot, unsigned e) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b.divides(a).
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend Monomial min(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    for (int w = 7; w >= 0; --w) {
      if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const;

 private:
  static constexpr int kDegreeLane = 31;
  void set_lane(int lane, unsigned value);

  std::array<std::uint64_t, 8> words_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial mono;
  mpz_class coef;
};

/// Sparse multivariate polynomial with integer coefficients.
///
/// Terms are kept sorted by decreasing monomial and carry no zero
/// coefficients, so structural equality is polynomial equality.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const mpz_class& c);
  explicit Polynomial(long c) : Polynomial(mpz_class(c)) {}
  static Polynomial variable(VarId v);
  static Polynomial monomial(const Monomial& m, const mpz_class& c);
  /// Sorts, merges equal monomials and drops zero coefficients.
  static Polynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  /// Constant term value; zero for the zero polynomial.
  mpz_class constant_value() const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  int sign() const { return terms_.empty() ? 0 : sgn(terms_.front().coef); }

  /// Nonnegative gcd of the coefficients.
  mpz_class content() const;
  Monomial monomial_content() const;
  unsigned degree_in(int slot) const;
  std::uint32_t support() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const mpz_class& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const mpz_class& c) { return a *= c; }
  Polynomial pow(unsigned n) const;

  /// Divides every coefficient by c, which must divide them all.
  Polynomial divide_coefficients(const mpz_class& c) const;
  /// Divides every term by m, which must divide them all.
  Polynomial divide_monomial(const Monomial& m) const;

  Polynomial partial(int slot) const;
  /// Replaces each slot by the given polynomial image (kSlotCount images).
  Polynomial substitute(std::span<const Polynomial> images) const;

  mpq_class evaluate(std::span<const mpq_class> slots) const;
  double evaluate(std::span<const double> slots) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract);

  std::vector<Term> terms_;
};

/// Quotient a / b if b divides a exactly, otherwise nullopt.
std::optional<Polynomial> try_divide(const Polynomial& a, const Polynomial& b);
/// Quotient a / b; throws std::domain_error if the division is not exact.
Polynomial divide_exact(const Polynomial& a, const Polynomial& b);
/// Greatest common divisor with positive leading coefficient; gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

}  // namespace confgeo
