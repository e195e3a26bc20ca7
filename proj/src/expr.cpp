#include "confgeo/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "confgeo/errors.hpp"

namespace confgeo {

// ------------------------------------------------------------- SamplePoint

SamplePoint::SamplePoint(int dim) : dim_(dim), values_(kSlotCount) {
  if (dim < 1 || dim > kMaxDimension) throw std::out_of_range("sample point dimension out of range");
}

void SamplePoint::set(VarId v, const mpq_class& value) {
  if (v.kind() != VarKind::X && v.index() > dim_) throw std::out_of_range("variable outside sample dimension");
  values_[v.slot()] = value;
}

std::vector<double> SamplePoint::slots_double() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i].get_d();
  return out;
}

std::vector<VarId> SamplePoint::variables() const {
  std::vector<VarId> vars{VarId::x()};
  for (int i = 1; i <= dim_; ++i) vars.push_back(VarId::y(i));
  for (int i = 1; i <= dim_; ++i) vars.push_back(VarId::p(i));
  for (int i = 1; i <= dim_; ++i) vars.push_back(VarId::q(i));
  return vars;
}

// -------------------------------------------------------------------- Expr

struct Expr::Node {
  Kind kind;
  mpq_class value;
  VarId var = VarId::x();
  std::vector<Expr> ops;
  int exponent = 0;
  std::uint32_t support = 0;
};

namespace {

std::shared_ptr<Expr::Node> make_node(Expr::Kind kind) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  return n;
}

}  // namespace

Expr::Expr() : Expr(mpq_class(0)) {}
Expr::Expr(long c) : Expr(mpq_class(c)) {}

Expr::Expr(const mpq_class& c) {
  auto n = make_node(Kind::Constant);
  n->value = c;
  n->value.canonicalize();
  node_ = std::move(n);
}

Expr Expr::variable(VarId v) {
  auto n = make_node(Kind::Variable);
  n->var = v;
  n->support = 1u << v.slot();
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  mpq_class constant = 0;
  for (auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& u : t.operands()) {
        if (u.kind() == Kind::Constant) {
          constant += u.constant();
        } else {
          flat.push_back(u);
        }
      }
    } else if (t.kind() == Kind::Constant) {
      constant += t.constant();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (constant != 0) flat.push_back(Expr(constant));
  if (flat.empty()) return Expr(0L);
  if (flat.size() == 1) return flat.front();
  auto n = make_node(Kind::Sum);
  for (const auto& t : flat) n->support |= t.support();
  n->ops = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  mpq_class constant = 1;
  for (auto& f : factors) {
    if (f.kind() == Kind::Product) {
      for (const auto& u : f.operands()) {
        if (u.kind() == Kind::Constant) {
          constant *= u.constant();
        } else {
          flat.push_back(u);
        }
      }
    } else if (f.kind() == Kind::Constant) {
      constant *= f.constant();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (constant == 0) return Expr(0L);
  if (flat.empty()) return Expr(constant);
  if (constant != 1) flat.insert(flat.begin(), Expr(constant));
  if (flat.size() == 1) return flat.front();
  auto n = make_node(Kind::Product);
  for (const auto& t : flat) n->support |= t.support();
  n->ops = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1L);
  if (exponent == 1) return base;
  if (base.kind() == Kind::Constant) {
    const mpq_class& c = base.constant();
    if (c == 0) {
      if (exponent < 0) throw StructuralError("negative power of zero");
      return Expr(0L);
    }
    mpq_class r;
    const unsigned n = static_cast<unsigned>(std::abs(exponent));
    mpz_pow_ui(r.get_num_mpz_t(), c.get_num_mpz_t(), n);
    mpz_pow_ui(r.get_den_mpz_t(), c.get_den_mpz_t(), n);
    r.canonicalize();
    if (exponent < 0) r = 1 / r;
    return Expr(r);
  }
  auto n = make_node(Kind::Power);
  n->ops = {base};
  n->exponent = exponent;
  n->support = base.support();
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::quotient(const Expr& num, const Expr& den) {
  if (den.kind() == Kind::Constant) {
    if (den.constant() == 0) throw StructuralError("division by zero");
    return product({Expr(mpq_class(1 / den.constant())), num});
  }
  if (num.is_constant(0)) return Expr(0L);
  auto n = make_node(Kind::Quotient);
  n->ops = {num, den};
  n->support = num.support() | den.support();
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const mpq_class& Expr::constant() const { return node_->value; }
VarId Expr::var() const { return node_->var; }
std::span<const Expr> Expr::operands() const { return node_->ops; }
int Expr::exponent() const { return node_->exponent; }
std::uint32_t Expr::support() const { return node_->support; }

bool Expr::is_constant(const mpq_class& c) const { return kind() == Kind::Constant && constant() == c; }

std::size_t Expr::node_count() const {
  std::unordered_set<const void*> seen;
  std::vector<Expr> stack{*this};
  while (!stack.empty()) {
    Expr e = stack.back();
    stack.pop_back();
    if (!seen.insert(e.id()).second) continue;
    for (const auto& o : e.operands()) stack.push_back(o);
  }
  return seen.size();
}

Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }

Expr Expr::operator-() const { return product({Expr(-1L), *this}); }

namespace {

// Precedence levels used when printing: sum < product < unary < power < atom.
enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

void print(const Expr& e, std::ostream& os, int context);

std::string constant_text(const mpq_class& c) {
  return c.get_den() == 1 ? c.get_num().get_str() : c.get_num().get_str() + "/" + c.get_den().get_str();
}

int own_prec(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: {
      const auto& c = e.constant();
      if (c < 0) return kUnary;
      return c.get_den() == 1 ? kAtom : kProduct;
    }
    case Expr::Kind::Variable: return kAtom;
    case Expr::Kind::Sum: return kSum;
    case Expr::Kind::Product: return kProduct;
    case Expr::Kind::Power: return kPower;
    case Expr::Kind::Quotient: return kProduct;
  }
  return kAtom;
}

void print(const Expr& e, std::ostream& os, int context) {
  const bool paren = own_prec(e) < context;
  if (paren) os << "(";
  switch (e.kind()) {
    case Expr::Kind::Constant: os << constant_text(e.constant()); break;
    case Expr::Kind::Variable: os << e.var().name(); break;
    case Expr::Kind::Sum: {
      bool first = true;
      for (const auto& t : e.operands()) {
        if (!first) os << " + ";
        print(t, os, first ? kSum : kProduct);
        first = false;
      }
      break;
    }
    case Expr::Kind::Product: {
      bool first = true;
      for (const auto& f : e.operands()) {
        if (!first) os << "*";
        // Right operands of * must bind tighter than * itself.
        print(f, os, first ? kUnary : kPower);
        first = false;
      }
      break;
    }
    case Expr::Kind::Power:
      print(e.operands()[0], os, kAtom);
      os << "^";
      if (e.exponent() < 0) {
        os << "(" << e.exponent() << ")";
      } else {
        os << e.exponent();
      }
      break;
    case Expr::Kind::Quotient:
      print(e.operands()[0], os, kUnary);
      os << "/";
      print(e.operands()[1], os, kAtom);
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string Expr::to_string() const {
  std::ostringstream os;
  print(*this, os, kSum);
  return os.str();
}

// ----------------------------------------------------------- normalization

namespace {

RationalForm normalize_memo(const Expr& e, std::unordered_map<const void*, RationalForm>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  RationalForm r;
  switch (e.kind()) {
    case Expr::Kind::Constant: r = RationalForm(e.constant()); break;
    case Expr::Kind::Variable: r = RationalForm::variable(e.var()); break;
    case Expr::Kind::Sum:
      for (const auto& t : e.operands()) r += normalize_memo(t, memo);
      break;
    case Expr::Kind::Product:
      r = RationalForm(1L);
      for (const auto& f : e.operands()) {
        r *= normalize_memo(f, memo);
        if (r.is_zero()) break;
      }
      break;
    case Expr::Kind::Power: {
      const RationalForm base = normalize_memo(e.operands()[0], memo);
      if (base.is_zero() && e.exponent() < 0) {
        throw StructuralError("negative power of identically zero expression " + e.operands()[0].to_string());
      }
      r = base.pow(e.exponent());
      break;
    }
    case Expr::Kind::Quotient: {
      const RationalForm den = normalize_memo(e.operands()[1], memo);
      if (den.is_zero()) {
        throw StructuralError("denominator is identically zero: " + e.operands()[1].to_string());
      }
      r = normalize_memo(e.operands()[0], memo) / den;
      break;
    }
  }
  memo.emplace(e.id(), r);
  return r;
}

Expr polynomial_expr(const Polynomial& p) {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    std::vector<Expr> factors{Expr(mpq_class(t.coef))};
    for (int s = 0; s < kSlotCount; ++s) {
      const unsigned e = t.mono.exponent(s);
      if (e != 0) factors.push_back(Expr::power(Expr::variable(VarId::from_slot(s)), static_cast<int>(e)));
    }
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

RationalForm normalize(const Expr& e) {
  std::unordered_map<const void*, RationalForm> memo;
  return normalize_memo(e, memo);
}

Expr to_expr(const RationalForm& f) {
  const Expr num = polynomial_expr(f.numerator());
  if (f.denominator().is_constant() && f.denominator().constant_value() == 1) return num;
  return Expr::quotient(num, polynomial_expr(f.denominator()));
}

// ------------------------------------------------------------ derivatives

Expr DerivativeCache::partial(const Expr& e, VarId v) { return derive(e, v.slot()); }

Expr DerivativeCache::derive(const Expr& e, int slot) {
  if (((e.support() >> slot) & 1u) == 0) return Expr(0L);
  if (e.kind() == Expr::Kind::Variable) return Expr(1L);
  const Key key{e.id(), slot};
  {
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return it->second.result;
  }
  Expr result;
  const auto ops = e.operands();
  switch (e.kind()) {
    case Expr::Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& t : ops) terms.push_back(derive(t, slot));
      result = Expr::sum(std::move(terms));
      break;
    }
    case Expr::Kind::Product: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expr d = derive(ops[i], slot);
        if (d.is_constant(0)) continue;
        std::vector<Expr> factors;
        for (std::size_t j = 0; j < ops.size(); ++j) factors.push_back(i == j ? d : ops[j]);
        terms.push_back(Expr::product(std::move(factors)));
      }
      result = Expr::sum(std::move(terms));
      break;
    }
    case Expr::Kind::Power: {
      const Expr& base = ops[0];
      const int n = e.exponent();
      result = Expr::product({Expr(static_cast<long>(n)), Expr::power(base, n - 1), derive(base, slot)});
      break;
    }
    case Expr::Kind::Quotient: {
      const Expr& num = ops[0];
      const Expr& den = ops[1];
      const Expr dn = derive(num, slot);
      const Expr dd = derive(den, slot);
      if (dd.is_constant(0)) {
        result = Expr::quotient(dn, den);
      } else {
        result = Expr::quotient(dn * den - num * dd, Expr::power(den, 2));
      }
      break;
    }
    default: break;
  }
  std::lock_guard lock(mutex_);
  table_.insert_or_assign(key, Entry{e, result});
  return result;
}

Expr partial(const Expr& e, VarId v) {
  DerivativeCache cache;
  return cache.partial(e, v);
}

// ------------------------------------------------------------- evaluation

mpq_class PointEvaluator::operator()(const Expr& e) {
  if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
  mpq_class r;
  switch (e.kind()) {
    case Expr::Kind::Constant: r = e.constant(); break;
    case Expr::Kind::Variable: r = pt_[e.var()]; break;
    case Expr::Kind::Sum:
      r = 0;
      for (const auto& t : e.operands()) r += (*this)(t);
      break;
    case Expr::Kind::Product:
      r = 1;
      for (const auto& f : e.operands()) {
        r *= (*this)(f);
        if (r == 0) break;
      }
      break;
    case Expr::Kind::Power: {
      const mpq_class b = (*this)(e.operands()[0]);
      const int n = e.exponent();
      if (b == 0 && n < 0) throw PoleError(e.to_string());
      const unsigned k = static_cast<unsigned>(std::abs(n));
      mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), k);
      mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), k);
      r.canonicalize();
      if (n < 0) r = 1 / r;
      break;
    }
    case Expr::Kind::Quotient: {
      const mpq_class d = (*this)(e.operands()[1]);
      if (d == 0) throw PoleError(e.operands()[1].to_string());
      r = (*this)(e.operands()[0]) / d;
      break;
    }
  }
  keep_.push_back(e);
  memo_.emplace(e.id(), r);
  return r;
}

mpq_class eval_exact(const Expr& e, const SamplePoint& pt) {
  PointEvaluator eval(pt);
  return eval(e);
}

namespace {

double eval_double_memo(const Expr& e, std::span<const double> slots, std::unordered_map<const void*, double>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  double r = 0.0;
  switch (e.kind()) {
    case Expr::Kind::Constant: r = e.constant().get_d(); break;
    case Expr::Kind::Variable: r = slots[e.var().slot()]; break;
    case Expr::Kind::Sum:
      for (const auto& t : e.operands()) r += eval_double_memo(t, slots, memo);
      break;
    case Expr::Kind::Product:
      r = 1.0;
      for (const auto& f : e.operands()) r *= eval_double_memo(f, slots, memo);
      break;
    case Expr::Kind::Power: r = std::pow(eval_double_memo(e.operands()[0], slots, memo), e.exponent()); break;
    case Expr::Kind::Quotient:
      r = eval_double_memo(e.operands()[0], slots, memo) / eval_double_memo(e.operands()[1], slots, memo);
      break;
  }
  memo.emplace(e.id(), r);
  return r;
}

}  // namespace

double eval_double(const Expr& e, std::span<const double> slots) {
  std::unordered_map<const void*, double> memo;
  return eval_double_memo(e, slots, memo);
}

// ------------------------------------------------------------- zero tests

int max_index(std::uint32_t support) {
  int m = 1;
  for (int s = 1; s < kSlotCount; ++s) {
    if ((support >> s) & 1u) m = std::max(m, VarId::from_slot(s).index());
  }
  return m;
}

ZeroVerdict randomized_zero_test(const Expr& e, const ZeroTestOptions& options) {
  const int dim = options.dim > 0 ? options.dim : max_index(e.support());
  std::mt19937_64 rng(options.seed);
  int misses = 0;
  for (int done = 0; done < options.samples;) {
    const SamplePoint pt = SamplePoint::random(dim, rng);
    try {
      if (eval_exact(e, pt) != 0) return ZeroVerdict::NonZero;
      ++done;
    } catch (const PoleError&) {
      if (++misses > 20) return ZeroVerdict::Undetermined;
    }
  }
  return ZeroVerdict::ProbablyZero;
}

bool is_zero(const Expr& e, const ZeroTestOptions& options) {
  if (e.kind() == Expr::Kind::Constant) return e.constant() == 0;
  if (randomized_zero_test(e, options) == ZeroVerdict::NonZero) return false;
  return normalize(e).is_zero();
}

}  // namespace confgeo
