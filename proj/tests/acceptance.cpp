// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "confgeo/conditions.hpp"
#include "confgeo/invariants.hpp"
#include "confgeo/oracle.hpp"
#include "i2_families.hpp"
#include "test_support.hpp"

using namespace confgeo;
using namespace confgeo::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool field_zero(const TensorField<Expr>& t) {
  for (const auto& e : t.entries()) {
    if (!is_zero(e)) return false;
  }
  return true;
}

bool all_residuals_zero(const Verdict& v) {
  for (std::size_t n = 0; n + 1 < v.conditions.size(); ++n) {
    if (!v.conditions[n].passed || !field_zero(v.conditions[n].residual)) return false;
  }
  return v.conditions.size() == 8;
}

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& o) {
  std::printf("%s criterion %d: %s;%s\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.passed) ++failures;
}

void criterion1() {
  Outcome o;
  for (int m : {2, 3}) {
    const auto t0 = Clock::now();
    const Verdict v = check_conformal(circle_system(m));
    const double secs = seconds_since(t0);
    o.require(v.conformal && !v.probable, "m=" + std::to_string(m) + " conformal");
    o.require(all_residuals_zero(v), "m=" + std::to_string(m) + " residuals 1-7 vanish");
    o.require(v.rank.condition.passed && v.rank.vanishing_points.empty(), "m=" + std::to_string(m) + " det I4");
    o.require(secs < 300, "m=" + std::to_string(m) + " under 5 minutes");
    const OracleReport oracle = numeric_circle_oracle(circle_system(m), 20, 1e-6, 0);
    o.require(oracle.passed, "m=" + std::to_string(m) + " oracle");
    double worst = 0;
    for (const auto& t : oracle.trajectories) {
      if (!t.skipped) worst = std::max({worst, t.curvature_deviation, t.max_torsion});
    }
    o.detail << " m=" << m << " exact " << secs << " s, oracle " << oracle.completed() << "/20 trajectories, worst "
             << worst;
  }
  report(1, "circle system is conformal (exact, det I4 not identically zero, oracle agrees)", o);
}

void criterion2() {
  Outcome o;
  auto rank_only = [&](const OdeSystem& sys, const std::string& name) {
    const auto t0 = Clock::now();
    const Verdict v = check_conformal(sys);
    const double secs = seconds_since(t0);
    o.require(!v.conformal && v.failing() == std::vector<std::string>{"rank"}, name + " fails on rank only");
    o.require(field_zero(invariant_I4(sys)), name + " I4 identically zero");
    o.require(secs < 10, name + " under 10 s");
    o.detail << " " << name << " " << secs << " s;";
  };
  rank_only(zero_system(2), "f=0");
  rank_only(system_of(2, {"2/3*p1", "2/3*p2"}), "f=2/3 p");
  rank_only(system_of(3, {"-5*p1", "-5*p2", "-5*p3"}), "f=-5 p (m=3)");

  const OdeSystem cubic = system_of(2, {"q2^3", "0"});
  const auto t0 = Clock::now();
  const Verdict v = check_conformal(cubic);
  const double secs = seconds_since(t0);
  o.require(!v.conformal && !v.conditions[0].passed, "cubic fails condition 1");
  const auto& w = v.conditions[0].witness;
  o.require(w.has_value(), "cubic witness present");
  if (w) {
    const mpq_class again = eval_exact(invariant_I2(cubic)(w->index[0], w->index[1], w->index[2]), w->point);
    o.require(again == w->value && again != 0, "witness re-verified");
    o.detail << " cubic witness I2(" << w->index[0] + 1 << "," << w->index[1] + 1 << "," << w->index[2] + 1
             << ") = " << w->value.get_str() << ", " << secs << " s";
  }
  o.require(secs < 10, "cubic under 10 s");
  report(2, "degenerate systems fail on rank, cubic fails condition 1 with an exact witness", o);
}

void criterion3() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int in_ok = 0, out_ok = 0;
  for (int n = 0; n < 50; ++n) {
    const int m = 2 + n % 2;
    const OdeSystem sys = assemble(random_quadratic(rng, m), m);
    if (field_zero(invariant_I2(sys)) && match_I2_zero_form(sys)) ++in_ok;
  }
  for (int n = 0; n < 50; ++n) {
    const int m = 2 + n % 2;
    const OdeSystem sys = violate(random_quadratic(rng, m), m, rng, n % 2);
    if (!field_zero(invariant_I2(sys)) && !match_I2_zero_form(sys)) ++out_ok;
  }
  o.require(in_ok == 50, "members");
  o.require(out_ok == 50, "violators");
  o.detail << " members " << in_ok << "/50 with I2=0 and matched, violators " << out_ok << "/50 with I2!=0 and unmatched";
  report(3, "I2 vanishes exactly on the quadratic q-form", o);
}

void criterion4() {
  Outcome o;
  const Readings defaults;
  o.require(defaults.i4 == I4Variant::Connection && defaults.d2w3 == D2W3Variant::B &&
                defaults.hm2 == Hm2Reading::Corrected && defaults.cube == CubeMode::Matrix &&
                defaults.cond2 == Cond2Reading::Tensorial,
            "default readings");
  for (int m : {2, 3}) {
    const OdeSystem circle = circle_system(m);
    const std::string tag = " m=" + std::to_string(m);
    const Verdict v = check_conformal(circle);
    const VariantLedger& l = v.ledger;
    o.require(l.readings == defaults, tag + " verdict used the defaults");

    // (a) the index-loop residual of condition 2 against Gx^T I4 + I4 Gx - d/dx I4.
    o.require(l.cond2_covariant_form_agrees, tag + " condition 2 vs covariant form");
    o.detail << tag << ": condition 2 index loop vs covariant form "
             << (l.cond2_covariant_form_agrees ? "agree" : "differ") << ", as-printed contraction "
             << (l.cond2_alternate_zero ? "vanishes" : "does not vanish") << ";";

    // (b) D_{e-2} W3 readings.
    const auto analysis = exact_analysis(circle);
    Readings ra, rb;
    ra.d2w3 = D2W3Variant::A;
    rb.d2w3 = D2W3Variant::B;
    const auto ca = analysis->conditions(ra);
    const auto cb = analysis->conditions(rb);
    o.require(l.d2w3_a_annihilates || l.d2w3_b_annihilates, tag + " some D2W3 reading annihilates");
    if (l.d2w3_a_annihilates && l.d2w3_b_annihilates) {
      bool same = true;
      for (int c = 0; c < 7; ++c) {
        for (std::size_t e = 0; e < ca->residual[c].entries().size(); ++e) {
          same = same && ca->residual[c].entries()[e] == cb->residual[c].entries()[e];
        }
      }
      o.require(same, tag + " D2W3 readings agree elsewhere");
    }
    o.detail << " D2W3 A " << (l.d2w3_a_annihilates ? "annihilates" : "does not") << ", B "
             << (l.d2w3_b_annihilates ? "annihilates" : "does not") << ";";

    // H^-2: corrected annihilates, literal does not.
    o.require(v.conformal, tag + " corrected H^-2 annihilates");
    o.require(!l.hm2_literal_conditions_pass, tag + " literal H^-2 does not annihilate");
    o.detail << " H^-2 corrected annihilates, literal "
             << (l.hm2_literal_conditions_pass ? "annihilates" : "does not") << ";";
  }
  report(4, "variant readings resolved and defaults frozen", o);
}

// Criterion 5: finite differences in exact rationals with step 1e-5, so the
// only error is truncation.
void criterion5() {
  Outcome o;
  const int m = 2;
  const OdeSystem sys = circle_system(m);
  const mpq_class h(1, 100000);
  std::mt19937_64 rng(555);
  double worst = 0;
  long comparisons = 0;
  auto rel = [](const mpq_class& exact, const mpq_class& fd) {
    if (exact == 0) return std::abs(fd.get_d());
    return std::abs(mpq_class((fd - exact) / exact).get_d());
  };
  auto shifted = [](const SamplePoint& pt, const std::vector<mpq_class>& dir, const mpq_class& t) {
    SamplePoint out = pt;
    for (auto v : pt.variables()) out.set(v, pt[v] + t * dir[v.slot()]);
    return out;
  };
  const auto vars = jet_variables(m);
  for (int n = 0; n < 50; ++n) {
    const Expr e = random_expr(rng, m, 4);
    std::vector<Expr> partials;
    for (auto v : vars) partials.push_back(partial(e, v));
    const Expr total = total_derivative(sys, e);
    for (int k = 0; k < 2; ++k) {
      const SamplePoint pt = SamplePoint::random(m, rng);
      for (std::size_t a = 0; a < vars.size(); ++a) {
        std::vector<mpq_class> dir(kSlotCount, 0);
        dir[vars[a].slot()] = 1;
        const mpq_class fd = (eval_exact(e, shifted(pt, dir, h)) - eval_exact(e, shifted(pt, dir, -h))) / (2 * h);
        worst = std::max(worst, rel(eval_exact(partials[a], pt), fd));
        ++comparisons;
      }
      // Total derivative is the directional derivative along (1, p, q, f).
      std::vector<mpq_class> dir(kSlotCount, 0);
      dir[VarId::x().slot()] = 1;
      for (int i = 1; i <= m; ++i) {
        dir[VarId::y(i).slot()] = pt[VarId::p(i)];
        dir[VarId::p(i).slot()] = pt[VarId::q(i)];
        dir[VarId::q(i).slot()] = eval_exact(sys.rhs(i - 1), pt);
      }
      const mpq_class fd = (eval_exact(e, shifted(pt, dir, h)) - eval_exact(e, shifted(pt, dir, -h))) / (2 * h);
      worst = std::max(worst, rel(eval_exact(total, pt), fd));
      ++comparisons;
    }
  }
  o.require(worst < 1e-6, "relative error below 1e-6");
  o.detail << " 50 expressions x 2 points (100 points), " << comparisons
           << " comparisons, max relative error (absolute where the exact value is 0) " << worst;
  report(5, "symbolic partial and total derivatives match central differences", o);
}

void criterion6() {
  Outcome o;
  std::mt19937_64 rng(666);
  int agree = 0, false_nonzero = 0, missed = 0, undetermined = 0, zeros = 0;
  for (int n = 0; n < 1000; ++n) {
    const int m = 2 + n % 2;
    const Expr a = random_expr(rng, m, 3), b = random_expr(rng, m, 3), c = random_expr(rng, m, 2);
    Expr e;
    switch (n % 5) {
      case 0: e = random_expr(rng, m, 4); break;
      case 1: e = a * (b + c) - (a * b + a * c); break;
      case 2: e = Expr::power(a + b, 2) - (a * a + Expr(2L) * a * b + b * b); break;
      case 3: e = Expr::quotient(a * (Expr(1L) + c * c), Expr(1L) + c * c) - a; break;
      default: e = a * (b - c) - a * b + a * c + Expr(mpq_class(1, 1000)) * Expr::variable(VarId::q(1)) * a; break;
    }
    const bool canonical = is_zero(e);
    const ZeroVerdict r = randomized_zero_test(e, {7, static_cast<std::uint64_t>(n), m});
    if (canonical) ++zeros;
    if (r == ZeroVerdict::NonZero && canonical) ++false_nonzero;
    if (r == ZeroVerdict::ProbablyZero && !canonical) ++missed;
    if (r == ZeroVerdict::Undetermined) ++undetermined;
    if ((r == ZeroVerdict::NonZero && !canonical) || (r == ZeroVerdict::ProbablyZero && canonical)) ++agree;
  }
  o.require(false_nonzero == 0, "randomized nonzero on a canonical zero");
  o.require(agree == 1000, "agreement on every expression");
  o.detail << " " << agree << "/1000 agree (" << zeros << " canonical zeros), " << false_nonzero
           << " randomized-nonzero/canonical-zero, " << missed << " missed nonzero, " << undetermined
           << " undetermined";
  report(6, "canonical and 7-point randomized zero tests agree", o);
}

void criterion7() {
  Outcome o;
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> small(-4, 4);
  const OdeSystem circle = circle_system(2);
  const auto t0 = Clock::now();
  int kept = 0, done = 0;
  while (done < 10) {
    RationalMatrix a{{mpq_class(small(rng), 2), mpq_class(small(rng), 3)},
                     {mpq_class(small(rng), 3), mpq_class(small(rng), 2)}};
    const mpq_class det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const int lam = small(rng);
    if (det == 0 || lam == 0) continue;
    const AffineChange ch(a, mpq_class(lam, 3), small(rng), {small(rng), small(rng)});
    ++done;
    if (check_conformal(affine_transform(circle, ch)).conformal) ++kept;
  }
  const double secs = seconds_since(t0);
  o.require(kept == 10, "verdict unchanged");
  o.require(secs < 600, "under 10 minutes");
  o.detail << " " << kept << "/10 transformed circle systems conformal, " << secs << " s";
  report(7, "verdict is invariant under affine changes of variables", o);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7};
  for (const auto& c : criteria) c();
  return failures == 0 ? 0 : 1;
}
