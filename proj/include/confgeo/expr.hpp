#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "confgeo/rational_form.hpp"
#include "confgeo/variable.hpp"

namespace confgeo {

/// Exact rational assignment to the jet coordinates of an m-dimensional
/// system. Slots beyond the dimension stay zero.
class SamplePoint {
 public:
  explicit SamplePoint(int dim);

  /// Coordinates drawn as a/b with |a| <= 1000 and 1 <= b <= 1000, a set of
  /// more than 10^6 distinct rationals.
  template <class Rng>
  static SamplePoint random(int dim, Rng& rng);

  int dim() const { return dim_; }
  const mpq_class& operator[](VarId v) const { return values_[v.slot()]; }
  void set(VarId v, const mpq_class& value);
  std::span<const mpq_class> slots() const { return values_; }
  std::vector<double> slots_double() const;
  /// Variables of the system in canonical order.
  std::vector<VarId> variables() const;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;

 private:
  int dim_;
  std::vector<mpq_class> values_;
};

template <class Rng>
SamplePoint SamplePoint::random(int dim, Rng& rng) {
  SamplePoint pt(dim);
  std::uniform_int_distribution<long> num(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 1000);
  for (auto v : pt.variables()) {
    mpq_class value(num(rng), den(rng));
    value.canonicalize();
    pt.set(v, value);
  }
  return pt;
}

/// Immutable symbolic expression over exact rationals in the jet variables.
///
/// Nodes are shared, so expressions form DAGs; the builders flatten nested
/// sums and products, fold constants and drop neutral elements but never
/// expand or cancel.
class Expr {
 public:
  enum class Kind : std::uint8_t { Constant, Variable, Sum, Product, Power, Quotient };

  Expr();  // the constant 0
  Expr(long c);             // NOLINT
  Expr(const mpq_class& c);  // NOLINT
  static Expr variable(VarId v);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, int exponent);
  /// Throws StructuralError if den is the constant zero.
  static Expr quotient(const Expr& num, const Expr& den);

  Kind kind() const;
  const mpq_class& constant() const;
  VarId var() const;
  std::span<const Expr> operands() const;
  int exponent() const;
  /// Bitmask of slots the expression mentions.
  std::uint32_t support() const;
  bool is_constant(const mpq_class& c) const;
  /// Distinct DAG nodes.
  std::size_t node_count() const;
  /// Identity of the shared node, for memo tables.
  const void* id() const { return node_.get(); }

  /// Text in the input grammar; parses back to an equal rational function.
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return quotient(a, b); }
  Expr operator-() const;
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Canonical form. Throws StructuralError if some quotient has an
/// identically zero denominator.
RationalForm normalize(const Expr& e);
/// Expression tree of a canonical form (numerator / denominator).
Expr to_expr(const RationalForm& f);

/// Exact partial derivative; other jet variables are independent.
Expr partial(const Expr& e, VarId v);

/// Memoized partial derivatives over a shared DAG. Safe for concurrent use.
class DerivativeCache {
 public:
  Expr partial(const Expr& e, VarId v);

 private:
  struct Key {
    const void* node;
    int slot;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<const void*>()(k.node) * 31u + static_cast<std::size_t>(k.slot);
    }
  };
  struct Entry {
    Expr source;  // keeps the keyed node alive
    Expr result;
  };

  Expr derive(const Expr& e, int slot);

  std::mutex mutex_;
  std::unordered_map<Key, Entry, KeyHash> table_;
};

/// Exact value; throws PoleError naming the offending subexpression.
mpq_class eval_exact(const Expr& e, const SamplePoint& pt);
double eval_double(const Expr& e, std::span<const double> slots);

/// Memoized exact evaluation of many expressions at one point.
class PointEvaluator {
 public:
  explicit PointEvaluator(SamplePoint pt) : pt_(std::move(pt)) {}
  mpq_class operator()(const Expr& e);
  const SamplePoint& point() const { return pt_; }

 private:
  SamplePoint pt_;
  std::unordered_map<const void*, mpq_class> memo_;
  std::vector<Expr> keep_;
};

struct ZeroTestOptions {
  int samples = 7;
  std::uint64_t seed = 0;
  /// Dimension used for sample points; defaults to the largest index seen.
  int dim = 0;
};

enum class ZeroVerdict { NonZero, ProbablyZero, Undetermined };

/// Schwartz-Zippel style test at random points. NonZero is certain;
/// ProbablyZero means every sample vanished; Undetermined means poles kept
/// appearing after 20 resamples.
ZeroVerdict randomized_zero_test(const Expr& e, const ZeroTestOptions& options = {});

/// True iff normalize(e) is (0, 1). The randomized pre-pass may only
/// short-circuit a "false" answer.
bool is_zero(const Expr& e, const ZeroTestOptions& options = {});

/// Largest jet index mentioned by the support mask (at least 1).
int max_index(std::uint32_t support);

}  // namespace confgeo
