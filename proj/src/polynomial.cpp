#include "confgeo/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "confgeo/errors.hpp"

namespace confgeo {

// ---------------------------------------------------------------- Monomial

namespace {

constexpr std::uint64_t kLaneHighBits = 0x8000800080008000ull;

}  // namespace

Monomial Monomial::power(int slot, unsigned exponent) {
  if (exponent > kMaxExponent) throw StructuralError("exponent overflow");
  Monomial m;
  m.set_lane(slot, exponent);
  m.set_lane(kDegreeLane, exponent);
  return m;
}

void Monomial::set_lane(int lane, unsigned value) {
  const int shift = 16 * (lane % 4);
  auto& w = words_[lane / 4];
  w = (w & ~(std::uint64_t{0xffff} << shift)) | (std::uint64_t{value} << shift);
}

std::uint32_t Monomial::support() const {
  std::uint32_t mask = 0;
  for (int s = 0; s < kSlotCount; ++s) {
    if (exponent(s) != 0) mask |= 1u << s;
  }
  return mask;
}

bool Monomial::divides(const Monomial& other) const {
  // Lane-wise other >= this. Lanes stay below 0x8000, so setting the top bit
  // of each lane of `other` absorbs any borrow from the subtraction.
  for (int w = 0; w < 8; ++w) {
    const std::uint64_t diff = (other.words_[w] | kLaneHighBits) - words_[w];
    if ((diff & kLaneHighBits) != kLaneHighBits) return false;
  }
  return true;
}

Monomial Monomial::with_exponent(int slot, unsigned e) const {
  const unsigned old = exponent(slot);
  const unsigned deg = degree() - old + e;
  if (e > kMaxExponent || deg > kMaxExponent) throw StructuralError("exponent overflow");
  Monomial m = *this;
  m.set_lane(slot, e);
  m.set_lane(kDegreeLane, deg);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int w = 0; w < 8; ++w) r.words_[w] = a.words_[w] + b.words_[w];
  if (r.degree() > Monomial::kMaxExponent) throw StructuralError("exponent overflow");
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int w = 0; w < 8; ++w) r.words_[w] = a.words_[w] - b.words_[w];
  return r;
}

Monomial min(const Monomial& a, const Monomial& b) {
  Monomial r;
  unsigned deg = 0;
  for (int s = 0; s < kSlotCount; ++s) {
    const unsigned e = std::min(a.exponent(s), b.exponent(s));
    r.set_lane(s, e);
    deg += e;
  }
  r.set_lane(Monomial::kDegreeLane, deg);
  return r;
}

std::size_t Monomial::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const mpz_class& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Polynomial Polynomial::variable(VarId v) { return monomial(Monomial::power(v.slot(), 1), 1); }

Polynomial Polynomial::monomial(const Monomial& m, const mpz_class& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono > b.mono; });
  Polynomial p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
      if (p.terms_.back().coef == 0) p.terms_.pop_back();
    } else if (t.coef != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

mpz_class Polynomial::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
  return 0;
}

mpz_class Polynomial::content() const {
  mpz_class g = 0;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial m = terms_.front().mono;
  for (const auto& t : terms_) {
    if (m.is_one()) break;
    m = min(m, t.mono);
  }
  return m;
}

unsigned Polynomial::degree_in(int slot) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(slot));
  return d;
}

std::uint32_t Polynomial::support() const {
  std::uint32_t mask = 0;
  for (const auto& t : terms_) mask |= t.mono.support();
  return mask;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Polynomial Polynomial::merge(const Polynomial& a, const Polynomial& b, bool subtract) {
  Polynomial r;
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->mono > ib->mono)) {
      r.terms_.push_back(*ia++);
    } else if (ia == a.terms_.end() || ib->mono > ia->mono) {
      r.terms_.push_back({ib->mono, subtract ? mpz_class(-ib->coef) : ib->coef});
      ++ib;
    } else {
      mpz_class c = subtract ? mpz_class(ia->coef - ib->coef) : mpz_class(ia->coef + ib->coef);
      if (c != 0) r.terms_.push_back({ia->mono, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.is_zero()) return *this;
  *this = merge(*this, other, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.is_zero()) return *this;
  *this = merge(*this, other, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
  } else if (c != 1) {
    for (auto& t : terms_) t.coef *= c;
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b * a.terms_[0].coef;
  if (b.is_constant()) return a * b.terms_[0].coef;
  const Polynomial& big = a.size() >= b.size() ? a : b;
  const Polynomial& small = a.size() >= b.size() ? b : a;
  if (small.size() == 1) {
    // Multiplying by a single term preserves the order.
    Polynomial r;
    r.terms_.reserve(big.size());
    const auto& s = small.terms_[0];
    for (const auto& t : big.terms_) r.terms_.push_back({t.mono * s.mono, t.coef * s.coef});
    return r;
  }
  std::unordered_map<Monomial, mpz_class, MonomialHash> acc;
  acc.reserve(big.size() * small.size());
  for (const auto& s : small.terms_) {
    for (const auto& t : big.terms_) {
      auto& c = acc[s.mono * t.mono];
      mpz_addmul(c.get_mpz_t(), s.coef.get_mpz_t(), t.coef.get_mpz_t());
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) terms.push_back({m, std::move(c)});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.mono > y.mono; });
  Polynomial r;
  r.terms_ = std::move(terms);
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1u) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::divide_coefficients(const mpz_class& c) const {
  if (c == 1) return *this;
  Polynomial r = *this;
  for (auto& t : r.terms_) mpz_divexact(t.coef.get_mpz_t(), t.coef.get_mpz_t(), c.get_mpz_t());
  return r;
}

Polynomial Polynomial::divide_monomial(const Monomial& m) const {
  if (m.is_one()) return *this;
  Polynomial r = *this;
  for (auto& t : r.terms_) t.mono = t.mono / m;
  return r;
}

Polynomial Polynomial::partial(int slot) const {
  // Lowering the same lane by one in every surviving term keeps their order.
  Polynomial r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    const unsigned e = t.mono.exponent(slot);
    if (e == 0) continue;
    r.terms_.push_back({t.mono.with_exponent(slot, e - 1), t.coef * e});
  }
  return r;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> images) const {
  if (images.size() != static_cast<std::size_t>(kSlotCount)) {
    throw std::invalid_argument("substitute needs one image per slot");
  }
  std::array<std::vector<Polynomial>, kSlotCount> powers;
  auto power_of = [&](int slot, unsigned e) -> const Polynomial& {
    auto& cache = powers[slot];
    if (cache.empty()) cache.push_back(Polynomial(1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[slot]);
    return cache[e];
  };
  Polynomial result;
  for (const auto& t : terms_) {
    Polynomial term(t.coef);
    for (int s = 0; s < kSlotCount; ++s) {
      const unsigned e = t.mono.exponent(s);
      if (e != 0) term *= power_of(s, e);
    }
    result += term;
  }
  return result;
}

mpq_class Polynomial::evaluate(std::span<const mpq_class> slots) const {
  mpq_class sum = 0;
  mpq_class term;
  mpq_class pw;
  for (const auto& t : terms_) {
    term = t.coef;
    for (int s = 0; s < kSlotCount; ++s) {
      const unsigned e = t.mono.exponent(s);
      if (e == 0) continue;
      mpz_pow_ui(pw.get_num_mpz_t(), slots[s].get_num_mpz_t(), e);
      mpz_pow_ui(pw.get_den_mpz_t(), slots[s].get_den_mpz_t(), e);
      term *= pw;
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> slots) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double term = t.coef.get_d();
    for (int s = 0; s < kSlotCount; ++s) {
      const unsigned e = t.mono.exponent(s);
      if (e != 0) term *= std::pow(slots[s], static_cast<int>(e));
    }
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpz_class c = t.coef;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    bool wrote = false;
    if (c != 1 || t.mono.is_one()) {
      os << c.get_str();
      wrote = true;
    }
    for (int s = 0; s < kSlotCount; ++s) {
      const unsigned e = t.mono.exponent(s);
      if (e == 0) continue;
      if (wrote) os << "*";
      os << VarId::from_slot(s).name();
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

// ---------------------------------------------------------------- division

std::optional<Polynomial> try_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return Polynomial{};
  if (b.is_constant()) {
    const mpz_class c = b.constant_value();
    for (const auto& t : a.terms()) {
      if (!mpz_divisible_p(t.coef.get_mpz_t(), c.get_mpz_t())) return std::nullopt;
    }
    Polynomial q = a.divide_coefficients(c < 0 ? mpz_class(-c) : c);
    return c < 0 ? -q : q;
  }
  // Cheap necessary conditions: leading and trailing terms must divide, and
  // the support of b must lie inside the support of a.
  const auto& lb = b.terms().front();
  const auto& tb = b.terms().back();
  if (!lb.mono.divides(a.terms().front().mono) || !tb.mono.divides(a.terms().back().mono)) return std::nullopt;
  if ((b.support() & ~a.support()) != 0) return std::nullopt;
  if (!mpz_divisible_p(a.terms().front().coef.get_mpz_t(), lb.coef.get_mpz_t()) ||
      !mpz_divisible_p(a.terms().back().coef.get_mpz_t(), tb.coef.get_mpz_t())) {
    return std::nullopt;
  }

  std::map<Monomial, mpz_class, std::greater<>> rem;
  for (const auto& t : a.terms()) rem.emplace(t.mono, t.coef);
  std::vector<Term> quotient;
  mpz_class qc;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lb.mono.divides(top->first)) return std::nullopt;
    if (!mpz_divisible_p(top->second.get_mpz_t(), lb.coef.get_mpz_t())) return std::nullopt;
    mpz_divexact(qc.get_mpz_t(), top->second.get_mpz_t(), lb.coef.get_mpz_t());
    const Monomial qm = top->first / lb.mono;
    rem.erase(top);
    for (std::size_t i = 1; i < b.terms().size(); ++i) {
      const auto& t = b.terms()[i];
      auto [it, inserted] = rem.try_emplace(qm * t.mono, 0);
      mpz_submul(it->second.get_mpz_t(), qc.get_mpz_t(), t.coef.get_mpz_t());
      if (it->second == 0) rem.erase(it);
    }
    quotient.push_back({qm, qc});
  }
  return Polynomial::from_terms(std::move(quotient));
}

Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
  auto q = try_divide(a, b);
  if (!q) throw std::domain_error("inexact polynomial division");
  return std::move(*q);
}

// --------------------------------------------------------------------- gcd

namespace {

Polynomial positive(Polynomial p) { return p.sign() < 0 ? -p : p; }

using Univariate = std::vector<Polynomial>;  // coefficient of v^d at index d

Univariate split_by(const Polynomial& p, int slot) {
  std::vector<std::vector<Term>> buckets(p.degree_in(slot) + 1);
  for (const auto& t : p.terms()) {
    const unsigned e = t.mono.exponent(slot);
    buckets[e].push_back({t.mono.with_exponent(slot, 0), t.coef});
  }
  Univariate u;
  u.reserve(buckets.size());
  for (auto& b : buckets) u.push_back(Polynomial::from_terms(std::move(b)));
  return u;
}

Polynomial join(const Univariate& u, int slot) {
  std::vector<Term> terms;
  for (std::size_t d = 0; d < u.size(); ++d) {
    for (const auto& t : u[d].terms()) terms.push_back({t.mono.with_exponent(slot, static_cast<unsigned>(d)), t.coef});
  }
  return Polynomial::from_terms(std::move(terms));
}

void trim(Univariate& u) {
  while (!u.empty() && u.back().is_zero()) u.pop_back();
}

Polynomial univariate_content(const Univariate& u) {
  // Smallest coefficients first: they bound the gcd fastest.
  std::vector<const Polynomial*> order;
  for (const auto& c : u) {
    if (!c.is_zero()) order.push_back(&c);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  Polynomial g;
  for (const auto* c : order) {
    g = gcd(g, *c);
    if (g.is_constant() && g.constant_value() == 1) break;
  }
  return g;
}

void divide_all(Univariate& u, const Polynomial& c) {
  if (c.is_constant() && c.constant_value() == 1) return;
  for (auto& x : u) {
    if (!x.is_zero()) x = divide_exact(x, c);
  }
}

Univariate pseudo_remainder(Univariate r, const Univariate& b) {
  const std::size_t db = b.size() - 1;
  const Polynomial& lcb = b.back();
  while (!r.empty() && r.size() - 1 >= db) {
    const std::size_t dr = r.size() - 1;
    const Polynomial lcr = r.back();
    const std::size_t shift = dr - db;
    for (std::size_t i = 0; i < dr; ++i) {
      Polynomial next = lcb * r[i];
      if (i >= shift) next -= lcr * b[i - shift];
      r[i] = std::move(next);
    }
    r.pop_back();
    trim(r);
  }
  return r;
}

Polynomial gcd_same_support(const Polynomial& a, const Polynomial& b);

// gcd of integer-primitive polynomials without monomial content.
Polynomial gcd_primitive(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b || a == -b) return positive(a);

  const std::uint32_t sa = a.support();
  const std::uint32_t sb = b.support();
  for (int pass = 0; pass < 2; ++pass) {
    const Polynomial& p = pass == 0 ? a : b;
    const Polynomial& other = pass == 0 ? b : a;
    const std::uint32_t only = pass == 0 ? (sa & ~sb) : (sb & ~sa);
    if (only == 0) continue;
    // The gcd is free of the slots in `only`, so it divides every
    // coefficient of p viewed as a polynomial in those slots.
    std::unordered_map<Monomial, std::vector<Term>, MonomialHash> groups;
    for (const auto& t : p.terms()) {
      Monomial key;
      Monomial rest = t.mono;
      for (int s = 0; s < kSlotCount; ++s) {
        if ((only >> s) & 1u) {
          key = key.with_exponent(s, t.mono.exponent(s));
          rest = rest.with_exponent(s, 0);
        }
      }
      groups[key].push_back({rest, t.coef});
    }
    std::vector<Polynomial> coeffs;
    coeffs.reserve(groups.size());
    for (auto& [k, terms] : groups) coeffs.push_back(Polynomial::from_terms(std::move(terms)));
    std::sort(coeffs.begin(), coeffs.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
    Polynomial g = other;
    for (const auto& c : coeffs) {
      g = gcd(g, c);
      if (g.is_constant()) return Polynomial(1);
    }
    return g;
  }
  return gcd_same_support(a, b);
}

Polynomial gcd_same_support(const Polynomial& a, const Polynomial& b) {
  const Polynomial& small = a.size() <= b.size() ? a : b;
  const Polynomial& big = a.size() <= b.size() ? b : a;
  if (try_divide(big, small)) return positive(small);

  const std::uint32_t support = a.support();
  int slot = -1;
  unsigned best = ~0u;
  for (int s = 0; s < kSlotCount; ++s) {
    if (((support >> s) & 1u) == 0) continue;
    const unsigned d = std::max(a.degree_in(s), b.degree_in(s));
    if (d < best) {
      best = d;
      slot = s;
    }
  }

  Univariate ua = split_by(a, slot);
  Univariate ub = split_by(b, slot);
  const Polynomial ca = univariate_content(ua);
  const Polynomial cb = univariate_content(ub);
  const Polynomial content = gcd(ca, cb);
  divide_all(ua, ca);
  divide_all(ub, cb);
  if (ua.size() < ub.size()) std::swap(ua, ub);

  // Primitive polynomial remainder sequence.
  while (!ub.empty()) {
    if (ub.size() == 1) return content;
    Univariate r = pseudo_remainder(ua, ub);
    ua = std::move(ub);
    if (!r.empty()) divide_all(r, univariate_content(r));
    ub = std::move(r);
  }
  return positive(content * join(ua, slot));
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return positive(b);
  if (b.is_zero()) return positive(a);
  mpz_class ia = a.content();
  mpz_class ib = b.content();
  mpz_class ig;
  mpz_gcd(ig.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
  const Monomial ma = a.monomial_content();
  const Monomial mb = b.monomial_content();
  const Monomial mg = min(ma, mb);
  if (a.is_constant() || b.is_constant()) return Polynomial(ig);
  const Polynomial ap = a.divide_coefficients(ia).divide_monomial(ma);
  const Polynomial bp = b.divide_coefficients(ib).divide_monomial(mb);
  Polynomial core = gcd_primitive(ap, bp);
  if (!mg.is_one()) core = core * Polynomial::monomial(mg, 1);
  if (ig != 1) core *= ig;
  return positive(std::move(core));
}

}  // namespace confgeo
