#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>

#include "confgeo/expr.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/rational_form.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

/// Which of the two I4 formulas to use.
enum class I4Variant { Intro, Connection };
/// D_{e-2} W3 correction term: 2(H^-1_k - H^-2_l B^l_k) W2 (A) or
/// 2(H^-2_k - H^-1_l B^l_k) W2 (B).
enum class D2W3Variant { A, B };
/// H^-2_j trailing term: sum_k H^-1_k df^k/dq^j (Corrected) or the literal
/// sum_k H^-1_k df^k/dq^k (Literal).
enum class Hm2Reading { Corrected, Literal };
/// The cube term of W3: matrix cube of df/dq or entrywise cube.
enum class CubeMode { Matrix, Entrywise };
/// Condition 2: the tensorial contraction sum_k df^k/dq^i (I4)_kj, or the
/// as-printed sum_k df^i/dq^k (I4)_kj.
enum class Cond2Reading { Tensorial, AsPrinted };

struct Readings {
  I4Variant i4 = I4Variant::Connection;
  D2W3Variant d2w3 = D2W3Variant::B;
  Hm2Reading hm2 = Hm2Reading::Corrected;
  CubeMode cube = CubeMode::Matrix;
  Cond2Reading cond2 = Cond2Reading::Tensorial;

  friend auto operator<=>(const Readings&, const Readings&) = default;
};

/// Jet space of a system over a scalar backend: RationalForm (canonical) or
/// Expr (shared DAG, for randomized evaluation).
template <class T>
class JetSpace {
 public:
  explicit JetSpace(const OdeSystem& sys);

  int dim() const { return m_; }
  const T& f(int i) const { return f_[i]; }
  T var(VarId v) const;
  T partial(const T& e, VarId v);
  /// d/dx + p_i d/dy_i + q_i d/dp_i + f_i d/dq_i
  T total(const T& e);

 private:
  int m_;
  std::vector<T> f_;
  DerivativeCache cache_;  // used by the Expr backend
};

template <class V>
class Lazy {
 public:
  template <class F>
  const V& get(F&& make) {
    std::call_once(flag_, [&] { value_.emplace(make()); });
    return *value_;
  }

 private:
  std::once_flag flag_;
  std::optional<V> value_;
};

template <class T>
struct ConnectionCoeffs {
  TensorField<T> A, B, C, Gx;       // matrices
  TensorField<T> E, Fm2, Fm3;       // vectors
  TensorField<T> Hm1, Hm2, Hm3;     // vectors
  TensorField<T> Gm2, Gm3;          // 3-tensors, (i, j, k) = G^{i,.}_{jk}
  TensorField<T> Hx;                // scalar
};

/// Index layout (i, j, k): entry (i, j) of the matrix, derivative direction k.
template <class T>
struct CovariantDerivs {
  TensorField<T> D1W2, D1W3, D2W2, D2W3_A, D2W3_B;
};

template <class T>
struct ConditionFields {
  /// Conditions 1..7, in order.
  std::array<TensorField<T>, 7> residual;
  /// Condition 2 under the other index reading, and in the covariant form
  /// Gx^T I4 + I4 Gx - d/dx I4.
  TensorField<T> cond2_alternate, cond2_covariant;
  /// Vanishing conditions on the Wilczynski invariants, stated with
  /// the covariant derivatives.
  std::array<TensorField<T>, 4> prop4;
  /// D_{e-2} I4 and D_{e-3} I4 from the gauge formulas, by direction.
  TensorField<T> bootstrap_d2, bootstrap_d3;
};

/// All fields derived from one system, computed lazily and at most once.
/// Thread-safe; independent fields may be requested concurrently.
template <class T>
class Analysis {
 public:
  explicit Analysis(const OdeSystem& sys);

  const OdeSystem& system() const { return sys_; }
  int dim() const { return sys_.dim(); }
  JetSpace<T>& jet() { return jet_; }

  const TensorField<T>& fq();   // df^i/dq^j
  const TensorField<T>& fp();
  const TensorField<T>& fy();
  const TensorField<T>& fqq();  // d2 f^i / dq^j dq^k
  const TensorField<T>& dfq();  // d/dx df^i/dq^j

  const TensorField<T>& hx();
  const TensorField<T>& hm1();
  const TensorField<T>& hm2(Hm2Reading r);
  const TensorField<T>& i2();
  const TensorField<T>& w2();
  const TensorField<T>& w3(CubeMode c);
  const TensorField<T>& i4(I4Variant v, Hm2Reading r = Hm2Reading::Corrected);
  const ConnectionCoeffs<T>& connection(Hm2Reading r);
  const CovariantDerivs<T>& covariant(Hm2Reading r, CubeMode c);
  std::shared_ptr<const ConditionFields<T>> conditions(const Readings& readings);

 private:
  static constexpr int kReadings = 2;

  OdeSystem sys_;
  JetSpace<T> jet_;
  Lazy<TensorField<T>> fq_, fp_, fy_, fqq_, dfq_, hx_, hm1_, i2_, w2_;
  Lazy<TensorField<T>> hm2_[kReadings], w3_[kReadings], i4_intro_, i4_connection_[kReadings];
  Lazy<ConnectionCoeffs<T>> connection_[kReadings];
  Lazy<CovariantDerivs<T>> covariant_[kReadings][kReadings];

  std::mutex conditions_mutex_;
  std::map<Readings, std::shared_ptr<const ConditionFields<T>>> conditions_;
};

extern template class JetSpace<RationalForm>;
extern template class JetSpace<Expr>;
extern template class Analysis<RationalForm>;
extern template class Analysis<Expr>;

/// Shared exact analysis of a system, cached by its canonical right-hand
/// sides. Concurrent first requests for the same key may both compute; the
/// last insertion wins and the values are equal.
std::shared_ptr<Analysis<RationalForm>> exact_analysis(const OdeSystem& sys);

}  // namespace confgeo
