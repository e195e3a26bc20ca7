#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confgeo/analysis.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

/// Index tuple (0-based), sample point and the exact nonzero value of the
/// residual entry there.
struct Witness {
  std::vector<int> index;
  SamplePoint point{2};
  mpq_class value;
};

struct ConditionResidual {
  std::string id;  // "1".."7" or "rank"
  TensorField<Expr> residual;
  bool passed = false;
  std::optional<Witness> witness;
};

struct RankAssessment {
  ConditionResidual condition;  // residual is the scalar det(I4)
  /// det(I4) at the sampled points; points where it vanishes are listed.
  std::vector<mpq_class> sampled_values;
  std::vector<SamplePoint> vanishing_points;
  std::string note;
};

/// Which readings were used and how the alternates behaved.
struct VariantLedger {
  Readings readings;
  bool i4_variants_agree = false;
  bool i4_symmetric = false;
  bool hm2_readings_agree = false;
  bool hm2_literal_conditions_pass = false;
  bool d2w3_a_annihilates = false;
  bool d2w3_b_annihilates = false;
  bool cond2_alternate_zero = false;
  bool cond2_covariant_form_agrees = false;
  bool w3_cube_readings_agree = false;
  bool prop4_agrees = false;
  bool bootstrap_d2_zero = false;
  bool bootstrap_d3_zero = false;
  bool connection_identities_hold = false;
  std::vector<std::string> notes;

  friend bool operator==(const VariantLedger&, const VariantLedger&) = default;
};

struct Verdict {
  bool conformal = false;
  /// True when decided by randomized evaluation only.
  bool probable = false;
  /// Conditions "1".."7" followed by "rank".
  std::vector<ConditionResidual> conditions;
  RankAssessment rank;
  VariantLedger ledger;
  std::string summary;
  /// Ids of the failing components.
  std::vector<std::string> failing() const;
};

struct CheckOptions {
  Readings readings;
  std::uint64_t seed = 0;
  /// Decide every zero test by randomized evaluation on the expression DAG,
  /// without canonical forms.
  bool numeric_only = false;
  /// Compute the alternate readings for the ledger.
  bool ledger = true;
};

CovariantDerivs<Expr> covariant_derivatives(const OdeSystem& sys, Hm2Reading reading = Hm2Reading::Corrected,
                                            CubeMode cube = CubeMode::Matrix);
std::vector<ConditionResidual> condition_residuals(const OdeSystem& sys, const CheckOptions& options = {});
RankAssessment i4_rank_assessment(const OdeSystem& sys, const CheckOptions& options = {});
Verdict check_conformal(const OdeSystem& sys, const CheckOptions& options = {});

/// Determinant of a square matrix field by expansion over column subsets.
template <class T>
T determinant(const TensorField<T>& a);

}  // namespace confgeo
