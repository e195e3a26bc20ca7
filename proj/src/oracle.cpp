#include "confgeo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace confgeo {

ThirdOrderRhs numeric_rhs(const OdeSystem& sys) {
  std::vector<RationalForm> f;
  for (const auto& e : sys.rhs()) f.push_back(normalize(e));
  const int m = sys.dim();
  return [f = std::move(f), m](double x, const std::vector<double>& state, std::vector<double>& out) {
    std::vector<double> slots(kSlotCount, 0.0);
    slots[0] = x;
    for (int i = 1; i <= m; ++i) {
      slots[VarId::y(i).slot()] = state[i - 1];
      slots[VarId::p(i).slot()] = state[m + i - 1];
      slots[VarId::q(i).slot()] = state[2 * m + i - 1];
    }
    out.resize(m);
    for (int i = 0; i < m; ++i) out[i] = f[i].evaluate(std::span<const double>(slots));
  };
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using Vec = std::vector<double>;

struct FirstOrder {
  const ThirdOrderRhs& f;
  int m;
  mutable Vec third;

  // z = (y, p, q), z' = (p, q, f).
  void operator()(double x, const Vec& z, Vec& dz) const {
    dz.resize(z.size());
    for (int i = 0; i < 2 * m; ++i) dz[i] = z[m + i];
    f(x, z, third);
    for (int i = 0; i < m; ++i) dz[2 * m + i] = third[i];
  }
};

bool finite(const Vec& v, double bound) {
  return std::all_of(v.begin(), v.end(), [&](double d) { return std::isfinite(d) && std::abs(d) <= bound; });
}

Vec axpy(const Vec& z, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = z;
  for (std::size_t n = 0; n < z.size(); ++n) {
    double s = 0;
    for (const auto& [coef, k] : terms) s += coef * (*k)[n];
    out[n] += h * s;
  }
  return out;
}

}  // namespace

std::optional<Trajectory> integrate(const ThirdOrderRhs& f, int m, double x0, std::vector<double> state0,
                                    double length, int intervals, const IntegrationOptions& options,
                                    std::string* reason) {
  auto give_up = [&](const std::string& why) -> std::optional<Trajectory> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  const FirstOrder rhs{f, m, {}};
  Trajectory t;
  const double grid = length / intervals;
  Vec z = std::move(state0);
  double x = x0;
  t.x.push_back(x);
  t.state.push_back(z);
  double h = std::min(grid, 1e-3);
  Vec k1, k2, k3, k4, k5, k6, k7;
  rhs(x, z, k1);
  if (!finite(k1, options.blowup)) return give_up("pole or blow-up at the initial point");

  for (int n = 1; n <= intervals; ++n) {
    const double target = x0 + n * grid;
    int steps = 0;
    while (x < target) {
      if (++steps > 100000) return give_up("too many steps");
      bool last = false;
      if (x + h >= target) {
        h = target - x;
        last = true;
      }
      rhs(x + c2 * h, axpy(z, h, {{a21, &k1}}), k2);
      rhs(x + c3 * h, axpy(z, h, {{a31, &k1}, {a32, &k2}}), k3);
      rhs(x + c4 * h, axpy(z, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4);
      rhs(x + c5 * h, axpy(z, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5);
      rhs(x + h, axpy(z, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), k6);
      const Vec next = axpy(z, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      rhs(x + h, next, k7);
      double err = 0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = options.abs_tol + options.rel_tol * std::max(std::abs(z[i]), std::abs(next[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (!std::isfinite(err) || !finite(next, options.blowup) || !finite(k7, options.blowup)) {
        h *= 0.25;
        if (h < 1e-14) return give_up("pole or blow-up near x = " + std::to_string(x));
        continue;
      }
      if (err <= 1.0) {
        x = last ? target : x + h;
        z = next;
        k1 = k7;  // first-same-as-last
      }
      const double factor = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::max(h * factor, 1e-14);
      if (err > 1.0 && h <= 1e-14) return give_up("step size underflow near x = " + std::to_string(x));
    }
    t.x.push_back(x);
    t.state.push_back(z);
  }
  return t;
}

void measure_curve(const Trajectory& t, int m, double& curvature_mean, double& curvature_deviation,
                   double& max_torsion) {
  const std::size_t n = t.x.size();
  const double h = t.x[1] - t.x[0];
  const int dim = m + 1;
  auto dot = [&](const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
  };
  auto tangent = [&](std::size_t s) {
    Vec a(dim);
    a[0] = 1;
    for (int i = 0; i < m; ++i) a[i + 1] = t.state[s][m + i];
    return a;
  };
  auto normal = [&](std::size_t s) {
    Vec b(dim, 0.0);
    for (int i = 0; i < m; ++i) b[i + 1] = t.state[s][2 * m + i];
    return b;
  };

  std::vector<double> kappa;
  for (std::size_t s = 0; s < n; ++s) {
    const Vec a = tangent(s);
    const Vec b = normal(s);
    const double aa = dot(a, a);
    const double wedge2 = std::max(0.0, aa * dot(b, b) - dot(a, b) * dot(a, b));
    kappa.push_back(std::sqrt(wedge2) / std::pow(aa, 1.5));
  }
  curvature_mean = 0;
  for (double k : kappa) curvature_mean += k;
  curvature_mean /= static_cast<double>(kappa.size());
  curvature_deviation = 0;
  for (double k : kappa) curvature_deviation = std::max(curvature_deviation, std::abs(k - curvature_mean));

  max_torsion = 0;
  for (std::size_t s = 2; s + 2 < n; ++s) {
    const Vec a = tangent(s);
    const Vec b = normal(s);
    Vec c(dim, 0.0);
    for (int i = 0; i < m; ++i) {
      const int q = 2 * m + i;
      c[i + 1] = (-t.state[s + 2][q] + 8 * t.state[s + 1][q] - 8 * t.state[s - 1][q] + t.state[s - 2][q]) / (12 * h);
    }
    const double aa = dot(a, a);
    const double wedge = std::sqrt(std::max(0.0, aa * dot(b, b) - dot(a, b) * dot(a, b)));
    if (wedge < 1e-9) continue;  // locally a line
    // Component of r''' orthogonal to span(r', r'').
    Vec e1 = a;
    for (auto& v : e1) v /= std::sqrt(aa);
    Vec e2 = b;
    const double be = dot(b, e1);
    for (int i = 0; i < dim; ++i) e2[i] -= be * e1[i];
    const double ne2 = std::sqrt(dot(e2, e2));
    for (auto& v : e2) v /= ne2;
    const double ce1 = dot(c, e1);
    const double ce2 = dot(c, e2);
    double perp2 = 0;
    for (int i = 0; i < dim; ++i) {
      const double v = c[i] - ce1 * e1[i] - ce2 * e2[i];
      perp2 += v * v;
    }
    max_torsion = std::max(max_torsion, std::sqrt(perp2) / wedge);
  }
}

int OracleReport::completed() const {
  return static_cast<int>(std::count_if(trajectories.begin(), trajectories.end(), [](const auto& t) { return !t.skipped; }));
}

OracleReport numeric_circle_oracle(const OdeSystem& sys, int n_trajectories, double tolerance, std::uint64_t seed) {
  const int m = sys.dim();
  const ThirdOrderRhs f = numeric_rhs(sys);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ys(-1.0, 1.0);
  std::uniform_real_distribution<double> small(-0.5, 0.5);

  OracleReport report;
  report.tolerance = tolerance;
  for (int attempt = 0; attempt < 10 * n_trajectories && report.completed() < n_trajectories; ++attempt) {
    std::vector<double> state(3 * m);
    for (int i = 0; i < m; ++i) state[i] = ys(rng);
    for (int i = m; i < 3 * m; ++i) state[i] = small(rng);
    TrajectoryResult r;
    r.initial = {0.0};
    r.initial.insert(r.initial.end(), state.begin(), state.end());
    std::string reason;
    const auto t = integrate(f, m, 0.0, state, 1.0, 200, {}, &reason);
    if (!t) {
      r.skipped = true;
      r.reason = reason;
    } else {
      measure_curve(*t, m, r.curvature_mean, r.curvature_deviation, r.max_torsion);
      r.passed = r.curvature_deviation < tolerance && r.max_torsion < tolerance;
    }
    report.trajectories.push_back(std::move(r));
  }
  report.passed = report.completed() > 0 &&
                  std::all_of(report.trajectories.begin(), report.trajectories.end(),
                              [](const auto& t) { return t.skipped || t.passed; });
  return report;
}

}  // namespace confgeo
