#include "confgeo/jet.hpp"

#include <stdexcept>
#include <unordered_map>

#include "confgeo/errors.hpp"

namespace confgeo {

OdeSystem::OdeSystem(int m, std::vector<Expr> f) : m_(m), f_(std::move(f)) {
  if (m < 2 || m > kMaxDimension) {
    throw StructuralError("system dimension must lie in 2.." + std::to_string(kMaxDimension));
  }
  if (static_cast<int>(f_.size()) != m) throw StructuralError("expected " + std::to_string(m) + " right-hand sides");
  for (const auto& e : f_) {
    if (max_index(e.support()) > m) throw StructuralError("right-hand side mentions an index above " + std::to_string(m));
  }
}

std::string OdeSystem::canonical_key() const {
  std::string key = "m=" + std::to_string(m_) + "\n";
  for (const auto& e : f_) key += normalize(e).to_string() + "\n";
  return key;
}

std::vector<VarId> OdeSystem::variables() const { return SamplePoint(m_).variables(); }

Expr total_derivative(const OdeSystem& sys, const Expr& e, DerivativeCache& cache) {
  std::vector<Expr> terms{cache.partial(e, VarId::x())};
  for (int i = 1; i <= sys.dim(); ++i) {
    terms.push_back(Expr::variable(VarId::p(i)) * cache.partial(e, VarId::y(i)));
    terms.push_back(Expr::variable(VarId::q(i)) * cache.partial(e, VarId::p(i)));
    terms.push_back(sys.rhs(i - 1) * cache.partial(e, VarId::q(i)));
  }
  return Expr::sum(std::move(terms));
}

Expr total_derivative(const OdeSystem& sys, const Expr& e) {
  DerivativeCache cache;
  return total_derivative(sys, e, cache);
}

// ------------------------------------------------------------ linear algebra

mpq_class determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  mpq_class det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const mpq_class factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return det;
}

RationalMatrix inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix work = a;
  RationalMatrix inv(n, std::vector<mpq_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::domain_error("singular matrix");
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    const mpq_class scale = 1 / work[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      work[col][c] *= scale;
      inv[col][c] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || work[r][col] == 0) continue;
      const mpq_class factor = work[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        work[r][c] -= factor * work[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------- affine changes

AffineChange::AffineChange(RationalMatrix a, mpq_class lambda, mpq_class shift_x, std::vector<mpq_class> shift_y)
    : a_(std::move(a)), lambda_(std::move(lambda)), c_(std::move(shift_x)), b_(std::move(shift_y)) {
  const std::size_t n = a_.size();
  for (const auto& row : a_) {
    if (row.size() != n) throw std::invalid_argument("affine change matrix must be square");
  }
  if (b_.size() != n) throw std::invalid_argument("affine change shift has wrong length");
  if (lambda_ == 0) throw std::invalid_argument("affine change with zero x-scaling");
  if (determinant(a_) == 0) throw std::invalid_argument("affine change with singular matrix");
  a_inv_ = inverse(a_);
}

AffineChange AffineChange::identity(int m) {
  RationalMatrix a(m, std::vector<mpq_class>(m, 0));
  for (int i = 0; i < m; ++i) a[i][i] = 1;
  return AffineChange(std::move(a), 1, 0, std::vector<mpq_class>(m, 0));
}

AffineChange AffineChange::after(const AffineChange& first) const {
  const std::size_t n = a_.size();
  if (first.a_.size() != n) throw std::invalid_argument("composing affine changes of different dimension");
  RationalMatrix a(n, std::vector<mpq_class>(n, 0));
  std::vector<mpq_class> b = b_;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) a[i][j] += a_[i][k] * first.a_[k][j];
      b[i] += a_[i][j] * first.b_[j];
    }
  }
  return AffineChange(std::move(a), lambda_ * first.lambda_, lambda_ * first.c_ + c_, std::move(b));
}

std::vector<double> AffineChange::map_point(const std::vector<double>& slots) const {
  const int m = dim();
  std::vector<double> out(slots.size(), 0.0);
  const double lambda = lambda_.get_d();
  out[0] = lambda * slots[0] + c_.get_d();
  for (int i = 1; i <= m; ++i) {
    double y = b_[i - 1].get_d();
    double p = 0.0;
    double q = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double a = a_[i - 1][j - 1].get_d();
      y += a * slots[VarId::y(j).slot()];
      p += a * slots[VarId::p(j).slot()];
      q += a * slots[VarId::q(j).slot()];
    }
    out[VarId::y(i).slot()] = y;
    out[VarId::p(i).slot()] = p / lambda;
    out[VarId::q(i).slot()] = q / (lambda * lambda);
  }
  return out;
}

Expr substitute(const Expr& e, const std::vector<std::optional<Expr>>& images) {
  std::unordered_map<const void*, Expr> memo;
  std::vector<Expr> keep;
  auto rec = [&](auto&& self, const Expr& node) -> Expr {
    if (auto it = memo.find(node.id()); it != memo.end()) return it->second;
    Expr out;
    switch (node.kind()) {
      case Expr::Kind::Constant: out = node; break;
      case Expr::Kind::Variable: {
        const auto& img = images[node.var().slot()];
        out = img ? *img : node;
        break;
      }
      case Expr::Kind::Sum:
      case Expr::Kind::Product: {
        std::vector<Expr> ops;
        for (const auto& o : node.operands()) ops.push_back(self(self, o));
        out = node.kind() == Expr::Kind::Sum ? Expr::sum(std::move(ops)) : Expr::product(std::move(ops));
        break;
      }
      case Expr::Kind::Power: out = Expr::power(self(self, node.operands()[0]), node.exponent()); break;
      case Expr::Kind::Quotient:
        out = Expr::quotient(self(self, node.operands()[0]), self(self, node.operands()[1]));
        break;
    }
    keep.push_back(node);
    memo.emplace(node.id(), out);
    return out;
  };
  return rec(rec, e);
}

OdeSystem affine_transform(const OdeSystem& sys, const AffineChange& ch) {
  const int m = sys.dim();
  if (ch.dim() != m) throw std::invalid_argument("affine change dimension differs from system dimension");
  const auto& ainv = ch.matrix_inverse();
  const mpq_class& lambda = ch.lambda();
  std::vector<std::optional<Expr>> images(kSlotCount);
  images[0] = (Expr::variable(VarId::x()) - Expr(ch.shift_x())) / Expr(lambda);
  for (int i = 1; i <= m; ++i) {
    std::vector<Expr> y, p, q;
    for (int j = 1; j <= m; ++j) {
      const mpq_class& a = ainv[i - 1][j - 1];
      if (a == 0) continue;
      y.push_back(Expr(a) * (Expr::variable(VarId::y(j)) - Expr(ch.shift_y()[j - 1])));
      p.push_back(Expr(mpq_class(a * lambda)) * Expr::variable(VarId::p(j)));
      q.push_back(Expr(mpq_class(a * lambda * lambda)) * Expr::variable(VarId::q(j)));
    }
    images[VarId::y(i).slot()] = Expr::sum(std::move(y));
    images[VarId::p(i).slot()] = Expr::sum(std::move(p));
    images[VarId::q(i).slot()] = Expr::sum(std::move(q));
  }
  std::vector<Expr> pulled;
  for (const auto& f : sys.rhs()) pulled.push_back(substitute(f, images));

  const mpq_class inv_cube = 1 / (lambda * lambda * lambda);
  std::vector<Expr> out;
  for (int i = 0; i < m; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < m; ++j) {
      const mpq_class& a = ch.matrix()[i][j];
      if (a != 0) terms.push_back(Expr(mpq_class(a * inv_cube)) * pulled[j]);
    }
    out.push_back(to_expr(normalize(Expr::sum(std::move(terms)))));
  }
  return OdeSystem(m, std::move(out));
}

}  // namespace confgeo
