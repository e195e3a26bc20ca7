#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confgeo/conditions.hpp"
#include "confgeo/oracle.hpp"

namespace confgeo {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct WitnessSummary {
  std::vector<int> index;                    // 1-based
  std::map<std::string, std::string> point;  // variable -> rational
  std::string value;
  friend bool operator==(const WitnessSummary&, const WitnessSummary&) = default;
};

struct ConditionSummary {
  std::string id;
  bool passed = false;
  std::optional<WitnessSummary> witness;
  friend bool operator==(const ConditionSummary&, const ConditionSummary&) = default;
};

struct RankSummary {
  std::string determinant;
  std::vector<std::string> sampled_values;
  int vanishing_points = 0;
  std::string note;
  friend bool operator==(const RankSummary&, const RankSummary&) = default;
};

struct LedgerSummary {
  std::map<std::string, std::string> readings;
  std::map<std::string, bool> checks;
  std::vector<std::string> notes;
  friend bool operator==(const LedgerSummary&, const LedgerSummary&) = default;
};

/// Entries of one dumped field, keyed by their 1-based index ("1,2").
struct FieldDump {
  std::string shape;
  std::map<std::string, std::string> entries;
  friend bool operator==(const FieldDump&, const FieldDump&) = default;
};

struct OracleSummary {
  bool passed = false;
  double tolerance = 0;
  int completed = 0;
  int skipped = 0;
  double max_curvature_deviation = 0;
  double max_torsion = 0;
  friend bool operator==(const OracleSummary&, const OracleSummary&) = default;
};

struct Report {
  int schema_version = kReportSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string input;
  std::optional<std::string> name;
  int dimension = 0;
  /// "conformal" or "not-conformal", prefixed with "probably-" when decided
  /// by randomized evaluation only.
  std::string verdict;
  bool probable = false;
  std::string summary;
  std::vector<std::string> failing;
  std::vector<ConditionSummary> conditions;
  RankSummary rank;
  LedgerSummary ledger;
  std::optional<std::map<std::string, FieldDump>> invariants;
  std::optional<OracleSummary> oracle;
  std::optional<std::map<std::string, double>> timings;
  friend bool operator==(const Report&, const Report&) = default;
};

Report make_report(const Verdict& verdict, int dimension, const std::string& input);
OracleSummary summarize(const OracleReport& oracle);
FieldDump dump_field(const TensorField<Expr>& field);

/// Pretty-printed JSON, keys sorted, trailing newline.
std::string serialize(const Report& report);
/// Throws std::runtime_error on malformed documents.
Report parse_report(const std::string& text);

/// Plain-text rendering for terminals.
std::string render_text(const Report& report);

std::string reading_name(I4Variant v);
std::string reading_name(D2W3Variant v);
std::string reading_name(Hm2Reading v);
std::string reading_name(CubeMode v);
std::string reading_name(Cond2Reading v);

}  // namespace confgeo
