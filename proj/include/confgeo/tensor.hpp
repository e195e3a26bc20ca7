#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "confgeo/expr.hpp"
#include "confgeo/rational_form.hpp"

namespace confgeo {

enum class Shape { Scalar, Vector, Matrix, Tensor3 };

inline int shape_rank(Shape s) { return static_cast<int>(s); }
std::string shape_name(Shape s);

/// Dense indexed array of entries over the m jet indices. Indices are
/// 0-based here; reports print them 1-based.
template <class T>
class TensorField {
 public:
  TensorField() = default;
  TensorField(Shape shape, int m) : shape_(shape), m_(m), data_(count(shape, m)) {}
  static TensorField scalar(T value) {
    TensorField t(Shape::Scalar, 1);
    t.data_[0] = std::move(value);
    return t;
  }

  Shape shape() const { return shape_; }
  int dim() const { return m_; }
  std::size_t size() const { return data_.size(); }

  T& operator()() { return data_[0]; }
  const T& operator()() const { return data_[0]; }
  T& operator()(int i) { return data_[i]; }
  const T& operator()(int i) const { return data_[i]; }
  T& operator()(int i, int j) { return data_[i * m_ + j]; }
  const T& operator()(int i, int j) const { return data_[i * m_ + j]; }
  T& operator()(int i, int j, int k) { return data_[(i * m_ + j) * m_ + k]; }
  const T& operator()(int i, int j, int k) const { return data_[(i * m_ + j) * m_ + k]; }

  const std::vector<T>& entries() const { return data_; }
  std::vector<T>& entries() { return data_; }

  /// Index tuple of a flat position.
  std::vector<int> index_of(std::size_t flat) const {
    std::vector<int> idx(shape_rank(shape_));
    for (int r = shape_rank(shape_) - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(flat % m_);
      flat /= m_;
    }
    return idx;
  }

  template <class F>
  auto map(F&& f) const -> TensorField<decltype(f(std::declval<const T&>()))> {
    TensorField<decltype(f(std::declval<const T&>()))> out(shape_, m_);
    for (std::size_t n = 0; n < data_.size(); ++n) out.entries()[n] = f(data_[n]);
    return out;
  }

 private:
  static std::size_t count(Shape s, int m) {
    std::size_t n = 1;
    for (int r = 0; r < shape_rank(s); ++r) n *= static_cast<std::size_t>(m);
    return n;
  }

  Shape shape_ = Shape::Scalar;
  int m_ = 1;
  std::vector<T> data_;
};

template <class T>
TensorField<T> operator+(const TensorField<T>& a, const TensorField<T>& b) {
  TensorField<T> out = a;
  for (std::size_t n = 0; n < a.size(); ++n) out.entries()[n] = a.entries()[n] + b.entries()[n];
  return out;
}

template <class T>
TensorField<T> operator-(const TensorField<T>& a, const TensorField<T>& b) {
  TensorField<T> out = a;
  for (std::size_t n = 0; n < a.size(); ++n) out.entries()[n] = a.entries()[n] - b.entries()[n];
  return out;
}

template <class T>
TensorField<T> scaled(const TensorField<T>& a, const mpq_class& c) {
  return a.map([&](const T& v) { return T(c) * v; });
}

template <class T>
TensorField<T> matmul(const TensorField<T>& a, const TensorField<T>& b) {
  const int m = a.dim();
  TensorField<T> out(Shape::Matrix, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      T s;
      for (int k = 0; k < m; ++k) s = s + a(i, k) * b(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

template <class T>
TensorField<T> transpose(const TensorField<T>& a) {
  const int m = a.dim();
  TensorField<T> out(Shape::Matrix, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out(i, j) = a(j, i);
  }
  return out;
}

template <class T>
T trace(const TensorField<T>& a) {
  T s;
  for (int i = 0; i < a.dim(); ++i) s = s + a(i, i);
  return s;
}

/// M - (tr M / m) Id.
template <class T>
TensorField<T> trace_free_matrix(const TensorField<T>& a) {
  if (a.shape() != Shape::Matrix) throw std::invalid_argument("trace_free_matrix needs a matrix field");
  const int m = a.dim();
  const T t = T(mpq_class(1, m)) * trace(a);
  TensorField<T> out = a;
  for (int i = 0; i < m; ++i) out(i, i) = a(i, i) - t;
  return out;
}

/// T^i_jk - (T_j delta^i_k + T_k delta^i_j) / (m + 1) with T_j = T^i_ij.
/// The input must be symmetric in j, k; `symmetric` checks one pair.
template <class T, class Eq>
TensorField<T> trace_free_sym3(const TensorField<T>& t, Eq&& symmetric) {
  if (t.shape() != Shape::Tensor3) throw std::invalid_argument("trace_free_sym3 needs a 3-tensor field");
  const int m = t.dim();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        if (!symmetric(t(i, j, k), t(i, k, j))) throw std::invalid_argument("tensor is not symmetric in its lower indices");
      }
    }
  }
  std::vector<T> contraction(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) contraction[j] = contraction[j] + t(i, i, j);
  }
  const T scale(mpq_class(1, m + 1));
  TensorField<T> out = t;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        T correction;
        if (i == k) correction = correction + contraction[j];
        if (i == j) correction = correction + contraction[k];
        out(i, j, k) = t(i, j, k) - scale * correction;
      }
    }
  }
  return out;
}

inline TensorField<RationalForm> trace_free_sym3(const TensorField<RationalForm>& t) {
  return trace_free_sym3(t, [](const RationalForm& a, const RationalForm& b) { return a == b; });
}

/// Expression view of an exact field.
TensorField<Expr> to_expr_field(const TensorField<RationalForm>& t);
TensorField<RationalForm> normalize_field(const TensorField<Expr>& t);

}  // namespace confgeo
