#include "confgeo/analysis.hpp"

#include <future>
#include <unordered_map>

namespace confgeo {

// ---------------------------------------------------------------- JetSpace

template <class T>
JetSpace<T>::JetSpace(const OdeSystem& sys) : m_(sys.dim()) {
  for (const auto& e : sys.rhs()) {
    if constexpr (std::is_same_v<T, Expr>) {
      f_.push_back(e);
    } else {
      f_.push_back(normalize(e));
    }
  }
}

template <class T>
T JetSpace<T>::var(VarId v) const {
  if constexpr (std::is_same_v<T, Expr>) {
    return Expr::variable(v);
  } else {
    return RationalForm::variable(v);
  }
}

template <class T>
T JetSpace<T>::partial(const T& e, VarId v) {
  if constexpr (std::is_same_v<T, Expr>) {
    return cache_.partial(e, v);
  } else {
    return confgeo::partial(e, v);
  }
}

template <class T>
T JetSpace<T>::total(const T& e) {
  const std::uint32_t support = e.support();
  auto has = [&](VarId v) { return ((support >> v.slot()) & 1u) != 0; };
  std::vector<T> terms;
  if (has(VarId::x())) terms.push_back(partial(e, VarId::x()));
  for (int i = 1; i <= m_; ++i) {
    if (has(VarId::y(i))) terms.push_back(var(VarId::p(i)) * partial(e, VarId::y(i)));
    if (has(VarId::p(i))) terms.push_back(var(VarId::q(i)) * partial(e, VarId::p(i)));
    if (has(VarId::q(i))) terms.push_back(f_[i - 1] * partial(e, VarId::q(i)));
  }
  if constexpr (std::is_same_v<T, Expr>) {
    return Expr::sum(std::move(terms));
  } else {
    T s;
    for (auto& t : terms) s += t;
    return s;
  }
}

template class JetSpace<RationalForm>;
template class JetSpace<Expr>;

// ---------------------------------------------------------------- Analysis

namespace {

template <class T>
T rat(long num, long den = 1) {
  return T(mpq_class(num, den));
}

template <class T>
bool symmetric_check(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, RationalForm>) {
    return a == b;
  } else {
    return true;  // mixed partials of an Expr are equal as functions, not as trees
  }
}

}  // namespace

template <class T>
Analysis<T>::Analysis(const OdeSystem& sys) : sys_(sys), jet_(sys) {}

template <class T>
const TensorField<T>& Analysis<T>::fq() {
  return fq_.get([&] {
    const int m = dim();
    TensorField<T> t(Shape::Matrix, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) t(i, j) = jet_.partial(jet_.f(i), VarId::q(j + 1));
    }
    return t;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::fp() {
  return fp_.get([&] {
    const int m = dim();
    TensorField<T> t(Shape::Matrix, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) t(i, j) = jet_.partial(jet_.f(i), VarId::p(j + 1));
    }
    return t;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::fy() {
  return fy_.get([&] {
    const int m = dim();
    TensorField<T> t(Shape::Matrix, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) t(i, j) = jet_.partial(jet_.f(i), VarId::y(j + 1));
    }
    return t;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::fqq() {
  return fqq_.get([&] {
    const int m = dim();
    const auto& q = fq();
    TensorField<T> t(Shape::Tensor3, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) t(i, j, k) = jet_.partial(q(i, j), VarId::q(k + 1));
      }
    }
    return t;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::dfq() {
  return dfq_.get([&] { return fq().map([&](const T& e) { return jet_.total(e); }); });
}

template <class T>
const TensorField<T>& Analysis<T>::hm1() {
  return hm1_.get([&] {
    const int m = dim();
    const auto& t = fqq();
    TensorField<T> h(Shape::Vector, m);
    const T scale = rat<T>(1, 6 * (m + 1));
    for (int j = 0; j < m; ++j) {
      T s;
      for (int i = 0; i < m; ++i) s = s + t(i, i, j);
      h(j) = scale * s;
    }
    return h;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::hx() {
  return hx_.get([&] {
    const int m = dim();
    const auto& q = fq();
    const T quad = rat<T>(1, 3) * trace(matmul(q, q));
    const T value = rat<T>(-1, 4 * m) * (trace(fp()) - jet_.total(trace(q)) + quad);
    return TensorField<T>::scalar(value);
  });
}

template <class T>
const TensorField<T>& Analysis<T>::i2() {
  return i2_.get([&] { return trace_free_sym3(fqq(), symmetric_check<T>); });
}

template <class T>
const TensorField<T>& Analysis<T>::w2() {
  return w2_.get([&] {
    const auto& q = fq();
    return trace_free_matrix(fp() - dfq() + scaled(matmul(q, q), mpq_class(1, 3)));
  });
}

template <class T>
const TensorField<T>& Analysis<T>::w3(CubeMode c) {
  return w3_[static_cast<int>(c)].get([&] {
    const int m = dim();
    const auto& q = fq();
    const auto& p = fp();
    const auto& dq = dfq();
    const TensorField<T> ddq = dq.map([&](const T& e) { return jet_.total(e); });
    const TensorField<T> dp = p.map([&](const T& e) { return jet_.total(e); });
    TensorField<T> cube;
    if (c == CubeMode::Matrix) {
      cube = matmul(matmul(q, q), q);
    } else {
      cube = q.map([](const T& e) { return e * e * e; });
    }
    TensorField<T> w = fy() + scaled(matmul(q, p), mpq_class(1, 3)) - dp + scaled(ddq, mpq_class(2, 3)) +
                       scaled(cube, mpq_class(2, 27)) - scaled(matmul(q, dq), mpq_class(4, 9)) -
                       scaled(matmul(dq, q), mpq_class(2, 9));
    const T dhx = rat<T>(2) * jet_.total(hx()());
    for (int i = 0; i < m; ++i) w(i, i) = w(i, i) - dhx;
    return w;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::hm2(Hm2Reading r) {
  return hm2_[static_cast<int>(r)].get([&] {
    const int m = dim();
    const auto& h1 = hm1();
    const auto& q = fq();
    const T& x = hx()();
    TensorField<T> h(Shape::Vector, m);
    for (int j = 0; j < m; ++j) {
      T s;
      for (int k = 0; k < m; ++k) s = s + h1(k) * q(k, r == Hm2Reading::Corrected ? j : k);
      h(j) = jet_.partial(x, VarId::q(j + 1)) - jet_.total(h1(j)) - s;
    }
    return h;
  });
}

template <class T>
const TensorField<T>& Analysis<T>::i4(I4Variant v, Hm2Reading r) {
  const int m = dim();
  if (v == I4Variant::Connection) {
    return i4_connection_[static_cast<int>(r)].get([&] {
      const auto& h1 = hm1();
      const auto& h2 = hm2(r);
      TensorField<T> t(Shape::Matrix, m);
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          t(j, k) = jet_.partial(h2(j), VarId::q(k + 1)) - jet_.partial(h1(k), VarId::p(j + 1)) +
                    rat<T>(2) * h1(j) * h1(k);
        }
      }
      return t;
    });
  }
  return i4_intro_.get([&] {
    const auto& h1 = hm1();
    const auto& q = fq();
    const T& x = hx()();
    std::vector<T> dh1(m), contracted(m), hxq(m);
    for (int j = 0; j < m; ++j) {
      dh1[j] = jet_.total(h1(j));
      hxq[j] = jet_.partial(x, VarId::q(j + 1));
      T s;
      for (int l = 0; l < m; ++l) s = s + h1(l) * q(l, j);
      contracted[j] = s;
    }
    TensorField<T> t(Shape::Matrix, m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        const VarId qk = VarId::q(k + 1);
        t(j, k) = jet_.partial(hxq[j], qk) - jet_.partial(h1(k), VarId::p(j + 1)) - jet_.partial(dh1[j], qk) -
                  jet_.partial(contracted[j], qk) + rat<T>(2) * h1(j) * h1(k);
      }
    }
    return t;
  });
}

template <class T>
const ConnectionCoeffs<T>& Analysis<T>::connection(Hm2Reading r) {
  return connection_[static_cast<int>(r)].get([&] {
    const int m = dim();
    const auto& q = fq();
    const auto& qq = fqq();
    ConnectionCoeffs<T> c;
    c.A = scaled(q, mpq_class(-1, 3));
    c.B = scaled(q, mpq_class(-2, 3));
    c.Gx = scaled(q, mpq_class(-1, 3));

    const T quad = rat<T>(1, 3) * trace(matmul(q, q));
    const T hx = rat<T>(1, 4 * m) * (-trace(fp()) + jet_.total(trace(q)) - quad);
    c.Hx = TensorField<T>::scalar(hx);

    c.C = scaled(fp(), mpq_class(-1)) + scaled(dfq(), mpq_class(2, 3)) - scaled(matmul(q, q), mpq_class(2, 9));
    for (int i = 0; i < m; ++i) c.C(i, i) = c.C(i, i) - rat<T>(2) * hx;

    // sum_i d2 f^i / dq^j dq^i
    std::vector<T> contraction(m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) contraction[j] = contraction[j] + qq(i, j, i);
    }
    c.E = TensorField<T>(Shape::Vector, m);
    c.Fm2 = TensorField<T>(Shape::Vector, m);
    c.Hm1 = TensorField<T>(Shape::Vector, m);
    for (int j = 0; j < m; ++j) {
      c.E(j) = rat<T>(-1, 3 * (m + 1)) * contraction[j];
      c.Fm2(j) = rat<T>(1, 6 * (m + 1)) * contraction[j];
      c.Hm1(j) = rat<T>(1, 6 * (m + 1)) * contraction[j];
    }
    c.Hm2 = hm2(r);

    c.Fm3 = TensorField<T>(Shape::Vector, m);
    c.Hm3 = TensorField<T>(Shape::Vector, m);
    for (int j = 0; j < m; ++j) {
      T s;
      for (int k = 0; k < m; ++k) s = s + c.Hm1(k) * q(k, j);
      c.Fm3(j) = jet_.partial(hx, VarId::q(j + 1)) - s - rat<T>(1, 3 * (m + 1)) * jet_.total(contraction[j]);
      c.Hm3(j) = jet_.partial(hx, VarId::p(j + 1)) - jet_.total(c.Hm2(j)) - s - rat<T>(2) * hx * c.Hm1(j);
    }

    c.Gm2 = scaled(qq, mpq_class(-1, 3));
    c.Gm3 = TensorField<T>(Shape::Tensor3, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          T v = rat<T>(-1, 3) * jet_.partial(q(i, j), VarId::p(k + 1)) - jet_.total(c.Gm2(i, j, k));
          for (int l = 0; l < m; ++l) v = v - c.Gx(i, l) * c.Gm2(l, j, k) + c.Gm2(i, l, k) * c.Gx(l, j);
          c.Gm3(i, j, k) = v;
        }
      }
    }
    return c;
  });
}

template <class T>
const CovariantDerivs<T>& Analysis<T>::covariant(Hm2Reading r, CubeMode cube) {
  return covariant_[static_cast<int>(r)][static_cast<int>(cube)].get([&] {
    const int m = dim();
    const auto& W2 = w2();
    const auto& W3 = w3(cube);
    const auto& h1 = hm1();
    const auto& h2 = hm2(r);
    const auto& conn = connection(r);
    const auto& B = conn.B;
    const auto& G2 = conn.Gm2;

    // Partial derivatives of W2 and W3 by direction.
    std::vector<TensorField<T>> w2q(m), w2p(m), w3q(m), w3p(m);
    for (int k = 0; k < m; ++k) {
      w2q[k] = W2.map([&](const T& e) { return jet_.partial(e, VarId::q(k + 1)); });
      w2p[k] = W2.map([&](const T& e) { return jet_.partial(e, VarId::p(k + 1)); });
      w3q[k] = W3.map([&](const T& e) { return jet_.partial(e, VarId::q(k + 1)); });
      w3p[k] = W3.map([&](const T& e) { return jet_.partial(e, VarId::p(k + 1)); });
    }

    CovariantDerivs<T> d;
    d.D1W2 = TensorField<T>(Shape::Tensor3, m);
    d.D1W3 = TensorField<T>(Shape::Tensor3, m);
    d.D2W2 = TensorField<T>(Shape::Tensor3, m);
    d.D2W3_A = TensorField<T>(Shape::Tensor3, m);
    d.D2W3_B = TensorField<T>(Shape::Tensor3, m);
    for (int k = 0; k < m; ++k) {
      T h1b, h2b;  // sum_l H^-1_l B^l_k, sum_l H^-2_l B^l_k
      for (int l = 0; l < m; ++l) {
        h1b = h1b + h1(l) * B(l, k);
        h2b = h2b + h2(l) * B(l, k);
      }
      const T coef_a = h1(k) - h2b;
      const T coef_b = h2(k) - h1b;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          d.D1W2(i, j, k) = w2q[k](i, j);
          d.D1W3(i, j, k) = w3q[k](i, j) + rat<T>(2) * h1(k) * W2(i, j);
          d.D2W2(i, j, k) = w2p[k](i, j) - rat<T>(4) * h1(k) * W2(i, j);
          T common = w3p[k](i, j) - rat<T>(6) * h1(k) * W3(i, j);
          for (int l = 0; l < m; ++l) {
            common = common - w3q[l](i, j) * B(l, k) + G2(i, l, k) * W3(l, j) - W3(i, l) * G2(l, j, k);
          }
          d.D2W3_A(i, j, k) = common + rat<T>(2) * coef_a * W2(i, j);
          d.D2W3_B(i, j, k) = common + rat<T>(2) * coef_b * W2(i, j);
        }
      }
    }
    return d;
  });
}

namespace {

template <class T>
TensorField<T> condition2(const TensorField<T>& q, const TensorField<T>& i4, const TensorField<T>& di4,
                          Cond2Reading reading) {
  const int m = q.dim();
  TensorField<T> r(Shape::Matrix, m);
  const T third = rat<T>(-1, 3);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      T s;
      for (int k = 0; k < m; ++k) {
        const T& left = reading == Cond2Reading::Tensorial ? q(k, i) : q(i, k);
        s = s + left * i4(k, j) + q(k, j) * i4(i, k);
      }
      r(i, j) = third * s - di4(i, j);
    }
  }
  return r;
}

}  // namespace

template <class T>
std::shared_ptr<const ConditionFields<T>> Analysis<T>::conditions(const Readings& rd) {
  {
    std::lock_guard lock(conditions_mutex_);
    if (auto it = conditions_.find(rd); it != conditions_.end()) return it->second;
  }
  const int m = dim();
  const auto& I4 = i4(rd.i4, rd.hm2);
  const auto& W2 = w2();
  const auto& W3 = w3(rd.cube);
  const auto& h1 = hm1();
  const auto& q = fq();
  const auto& conn = connection(rd.hm2);
  const auto& cov = covariant(rd.hm2, rd.cube);
  const auto& D2W3 = rd.d2w3 == D2W3Variant::A ? cov.D2W3_A : cov.D2W3_B;
  const TensorField<T> dI4 = I4.map([&](const T& e) { return jet_.total(e); });

  auto out = std::make_shared<ConditionFields<T>>();

  auto cond1 = [&] { return i2(); };
  auto cond2 = [&] { return condition2(q, I4, dI4, rd.cond2); };
  auto cond3 = [&] {
    TensorField<T> r(Shape::Tensor3, m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) r(j, k, l) = jet_.partial(I4(j, k), VarId::q(l + 1));
      }
    }
    return r;
  };
  auto cond4 = [&] { return cov.D1W2; };
  auto cond5 = [&] {
    TensorField<T> x(Shape::Tensor3, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          x(i, j, k) = jet_.partial(W2(i, k), VarId::p(j + 1)) - rat<T>(2) * jet_.partial(W3(i, k), VarId::q(j + 1)) +
                       jet_.partial(W3(i, j), VarId::q(k + 1)) - rat<T>(8) * h1(j) * W2(i, k) +
                       rat<T>(2) * h1(k) * W2(i, j);
        }
      }
    }
    TensorField<T> r = x;
    for (int k = 0; k < m; ++k) {
      T tr;
      for (int a = 0; a < m; ++a) tr = tr + x(a, a, k);
      const T correction = rat<T>(1, m) * tr;
      for (int i = 0; i < m; ++i) r(i, i, k) = x(i, i, k) - correction;
    }
    return r;
  };
  // sum_i dW3^i_k/dq^i and dW3^i_i/dq^k
  auto w3_div = [&](int k) {
    T s;
    for (int i = 0; i < m; ++i) s = s + jet_.partial(W3(i, k), VarId::q(i + 1));
    return s;
  };
  auto w3_trace_grad = [&](int k) {
    T s;
    for (int i = 0; i < m; ++i) s = s + jet_.partial(W3(i, i), VarId::q(k + 1));
    return s;
  };
  auto cond6 = [&] {
    TensorField<T> r(Shape::Matrix, m);
    for (int k = 0; k < m; ++k) {
      const T inner = rat<T>(-2) * w3_div(k) + w3_trace_grad(k);
      for (int l = 0; l < m; ++l) r(k, l) = jet_.partial(inner, VarId::q(l + 1));
    }
    return r;
  };
  auto cond7 = [&] {
    TensorField<T> r(Shape::Matrix, m);
    for (int j = 0; j < m; ++j) {
      T y;
      for (int i = 0; i < m; ++i) {
        y = y + jet_.partial(W2(i, j), VarId::p(i + 1)) - rat<T>(8) * h1(i) * W2(i, j);
      }
      y = y - rat<T>(2) * w3_div(j) + w3_trace_grad(j);
      T inner;
      for (int i = 0; i < m; ++i) inner = inner + D2W3(i, j, i) - D2W3(i, i, j);
      for (int l = 0; l < m; ++l) {
        T v = jet_.partial(inner, VarId::q(l + 1)) - h1(l) * y;
        for (int i = 0; i < m; ++i) v = v + I4(j, i) * W2(i, l);
        r(j, l) = v;
      }
    }
    return r;
  };

  auto f1 = std::async(std::launch::async, cond1);
  auto f2 = std::async(std::launch::async, cond2);
  auto f3 = std::async(std::launch::async, cond3);
  auto f5 = std::async(std::launch::async, cond5);
  auto f6 = std::async(std::launch::async, cond6);
  auto f7 = std::async(std::launch::async, cond7);
  out->residual[0] = f1.get();
  out->residual[1] = f2.get();
  out->residual[2] = f3.get();
  out->residual[3] = cond4();
  out->residual[4] = f5.get();
  out->residual[5] = f6.get();
  out->residual[6] = f7.get();

  out->cond2_alternate =
      condition2(q, I4, dI4, rd.cond2 == Cond2Reading::Tensorial ? Cond2Reading::AsPrinted : Cond2Reading::Tensorial);
  out->cond2_covariant = matmul(transpose(conn.Gx), I4) + matmul(I4, conn.Gx) - dI4;

  // Wilczynski-invariant conditions, through the covariant derivatives.
  out->prop4[0] = cov.D1W2;
  {
    TensorField<T> z(Shape::Tensor3, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          z(i, j, k) = cov.D1W3(i, j, k) - rat<T>(2) * cov.D1W3(i, k, j) + cov.D2W2(i, k, j);
        }
      }
    }
    TensorField<T> r = z;
    for (int k = 0; k < m; ++k) {
      T tr;
      for (int a = 0; a < m; ++a) tr = tr + z(a, a, k);
      const T correction = rat<T>(1, m) * tr;
      for (int i = 0; i < m; ++i) r(i, i, k) = z(i, i, k) - correction;
    }
    out->prop4[1] = r;
  }
  {
    TensorField<T> r(Shape::Matrix, m);
    for (int k = 0; k < m; ++k) {
      T inner;
      for (int i = 0; i < m; ++i) {
        inner = inner + cov.D1W3(i, i, k) - rat<T>(2) * cov.D1W3(i, k, i) + cov.D2W2(i, k, i);
      }
      for (int l = 0; l < m; ++l) r(k, l) = jet_.partial(inner, VarId::q(l + 1));
    }
    out->prop4[2] = r;
  }
  {
    TensorField<T> r(Shape::Matrix, m);
    for (int j = 0; j < m; ++j) {
      T inner;
      for (int i = 0; i < m; ++i) inner = inner + D2W3(i, j, i) - D2W3(i, i, j);
      for (int k = 0; k < m; ++k) {
        T v = jet_.partial(inner, VarId::q(k + 1));
        for (int i = 0; i < m; ++i) v = v + I4(j, i) * W2(i, k);
        r(j, k) = v;
      }
    }
    out->prop4[3] = r;
  }

  // D_{e-2} I4 and D_{e-3} I4 in the fixed gauge.
  {
    const auto& A = conn.A;
    const auto& B = conn.B;
    const auto& G2 = conn.Gm2;
    const auto& G3 = conn.Gm3;
    const TensorField<T> ba_c = matmul(B, A) - conn.C;
    TensorField<T> d2(Shape::Tensor3, m), d3(Shape::Tensor3, m);
    for (int k = 0; k < m; ++k) {
      TensorField<T> gk(Shape::Matrix, m), mk(Shape::Matrix, m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          gk(i, j) = G2(i, j, k);
          T v = conn.Gx(i, j) * conn.E(k) + G3(i, j, k);
          for (int l = 0; l < m; ++l) v = v - G2(i, j, l) * A(l, k);
          mk(i, j) = v;
        }
      }
      const TensorField<T> act2 = matmul(transpose(gk), I4) + matmul(I4, gk);
      const TensorField<T> act3 = matmul(transpose(mk), I4) + matmul(I4, mk);
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          const T& e = I4(a, b);
          T v2 = jet_.partial(e, VarId::p(k + 1)) - act2(a, b);
          T v3 = conn.E(k) * dI4(a, b) + jet_.partial(e, VarId::y(k + 1)) - act3(a, b);
          for (int l = 0; l < m; ++l) {
            const T eq = jet_.partial(e, VarId::q(l + 1));
            v2 = v2 - B(l, k) * eq;
            v3 = v3 - A(l, k) * jet_.partial(e, VarId::p(l + 1)) + ba_c(l, k) * eq;
          }
          d2(a, b, k) = v2;
          d3(a, b, k) = v3;
        }
      }
    }
    out->bootstrap_d2 = d2;
    out->bootstrap_d3 = d3;
  }

  std::lock_guard lock(conditions_mutex_);
  conditions_.insert_or_assign(rd, out);
  return out;
}

template class Analysis<RationalForm>;
template class Analysis<Expr>;

std::shared_ptr<Analysis<RationalForm>> exact_analysis(const OdeSystem& sys) {
  static std::mutex mutex;
  static std::unordered_map<std::string, std::shared_ptr<Analysis<RationalForm>>> cache;
  const std::string key = sys.canonical_key();
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto analysis = std::make_shared<Analysis<RationalForm>>(sys);
  std::lock_guard lock(mutex);
  cache.insert_or_assign(key, analysis);
  return analysis;
}

}  // namespace confgeo
