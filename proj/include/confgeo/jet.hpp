#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "confgeo/expr.hpp"
#include "confgeo/rational_form.hpp"

namespace confgeo {

/// The system y_i''' = f_i(x, y, p, q), i = 1..m.
class OdeSystem {
 public:
  /// Throws StructuralError unless 2 <= m <= kMaxDimension, f has m entries
  /// and no entry mentions a jet index above m.
  OdeSystem(int m, std::vector<Expr> f);

  int dim() const { return m_; }
  const std::vector<Expr>& rhs() const { return f_; }
  const Expr& rhs(int i) const { return f_[i]; }  // 0-based

  /// Canonical text of the right-hand sides, one per line.
  std::string canonical_key() const;

  std::vector<VarId> variables() const;

 private:
  int m_;
  std::vector<Expr> f_;
};

/// d/dx = d/dx + p_i d/dy_i + q_i d/dp_i + f_i d/dq_i on expressions.
Expr total_derivative(const OdeSystem& sys, const Expr& e);
Expr total_derivative(const OdeSystem& sys, const Expr& e, DerivativeCache& cache);

using RationalMatrix = std::vector<std::vector<mpq_class>>;

/// Determinant by Gaussian elimination over the rationals.
mpq_class determinant(RationalMatrix a);
/// Throws std::domain_error if a is singular.
RationalMatrix inverse(const RationalMatrix& a);

/// x' = lambda x + c, y' = A y + b.
class AffineChange {
 public:
  /// Throws std::invalid_argument if A is not square and invertible or
  /// lambda is zero.
  AffineChange(RationalMatrix a, mpq_class lambda, mpq_class shift_x, std::vector<mpq_class> shift_y);
  static AffineChange identity(int m);

  int dim() const { return static_cast<int>(a_.size()); }
  const RationalMatrix& matrix() const { return a_; }
  const RationalMatrix& matrix_inverse() const { return a_inv_; }
  const mpq_class& lambda() const { return lambda_; }
  const mpq_class& shift_x() const { return c_; }
  const std::vector<mpq_class>& shift_y() const { return b_; }

  /// Applies this change after `first`.
  AffineChange after(const AffineChange& first) const;

  /// Image of a jet point (x, y, p, q) given in slot layout.
  std::vector<double> map_point(const std::vector<double>& slots) const;

 private:
  RationalMatrix a_;
  RationalMatrix a_inv_;
  mpq_class lambda_;
  mpq_class c_;
  std::vector<mpq_class> b_;
};

/// The system satisfied by the transformed solutions, normalized.
OdeSystem affine_transform(const OdeSystem& sys, const AffineChange& ch);

/// Replaces variables by expressions; `images` is indexed by slot and empty
/// entries mean "unchanged".
Expr substitute(const Expr& e, const std::vector<std::optional<Expr>>& images);

}  // namespace confgeo
