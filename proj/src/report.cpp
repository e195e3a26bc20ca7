#include "confgeo/report.hpp"

#include <json.hpp>
#include <sstream>

namespace confgeo {

using nlohmann::json;

std::string reading_name(I4Variant v) { return v == I4Variant::Intro ? "intro" : "connection"; }
std::string reading_name(D2W3Variant v) { return v == D2W3Variant::A ? "a" : "b"; }
std::string reading_name(Hm2Reading v) { return v == Hm2Reading::Corrected ? "corrected" : "literal"; }
std::string reading_name(CubeMode v) { return v == CubeMode::Matrix ? "matrix" : "entrywise"; }
std::string reading_name(Cond2Reading v) { return v == Cond2Reading::Tensorial ? "tensorial" : "as-printed"; }

namespace {

std::string index_key(const std::vector<int>& index) {
  std::string key;
  for (std::size_t n = 0; n < index.size(); ++n) key += (n ? "," : "") + std::to_string(index[n] + 1);
  return key.empty() ? "scalar" : key;
}

WitnessSummary summarize(const Witness& w) {
  WitnessSummary s;
  for (int i : w.index) s.index.push_back(i + 1);
  for (auto v : w.point.variables()) s.point[v.name()] = w.point[v].get_str();
  s.value = w.value.get_str();
  return s;
}

}  // namespace

FieldDump dump_field(const TensorField<Expr>& field) {
  FieldDump d;
  d.shape = shape_name(field.shape());
  for (std::size_t n = 0; n < field.size(); ++n) d.entries[index_key(field.index_of(n))] = field.entries()[n].to_string();
  return d;
}

OracleSummary summarize(const OracleReport& oracle) {
  OracleSummary s;
  s.passed = oracle.passed;
  s.tolerance = oracle.tolerance;
  for (const auto& t : oracle.trajectories) {
    if (t.skipped) {
      ++s.skipped;
      continue;
    }
    ++s.completed;
    s.max_curvature_deviation = std::max(s.max_curvature_deviation, t.curvature_deviation);
    s.max_torsion = std::max(s.max_torsion, t.max_torsion);
  }
  return s;
}

Report make_report(const Verdict& verdict, int dimension, const std::string& input) {
  Report r;
  r.input = input;
  r.dimension = dimension;
  r.probable = verdict.probable;
  r.verdict = std::string(verdict.probable ? "probably-" : "") + (verdict.conformal ? "conformal" : "not-conformal");
  r.summary = verdict.summary;
  r.failing = verdict.failing();
  for (const auto& c : verdict.conditions) {
    ConditionSummary s{c.id, c.passed, std::nullopt};
    if (c.witness) s.witness = summarize(*c.witness);
    r.conditions.push_back(std::move(s));
  }
  r.rank.determinant = verdict.rank.condition.residual().to_string();
  for (const auto& v : verdict.rank.sampled_values) r.rank.sampled_values.push_back(v.get_str());
  r.rank.vanishing_points = static_cast<int>(verdict.rank.vanishing_points.size());
  r.rank.note = verdict.rank.note;

  const auto& l = verdict.ledger;
  r.ledger.readings = {
      {"i4", reading_name(l.readings.i4)},     {"d2w3", reading_name(l.readings.d2w3)},
      {"hm2", reading_name(l.readings.hm2)},   {"w3_cube", reading_name(l.readings.cube)},
      {"condition2", reading_name(l.readings.cond2)},
  };
  r.ledger.checks = {
      {"i4_variants_agree", l.i4_variants_agree},
      {"i4_symmetric", l.i4_symmetric},
      {"hm2_readings_agree", l.hm2_readings_agree},
      {"hm2_literal_conditions_pass", l.hm2_literal_conditions_pass},
      {"d2w3_a_annihilates", l.d2w3_a_annihilates},
      {"d2w3_b_annihilates", l.d2w3_b_annihilates},
      {"condition2_alternate_zero", l.cond2_alternate_zero},
      {"condition2_covariant_form_agrees", l.cond2_covariant_form_agrees},
      {"w3_cube_readings_agree", l.w3_cube_readings_agree},
      {"wilczynski_form_agrees", l.prop4_agrees},
      {"bootstrap_d2_i4_zero", l.bootstrap_d2_zero},
      {"bootstrap_d3_i4_zero", l.bootstrap_d3_zero},
      {"connection_identities_hold", l.connection_identities_hold},
  };
  r.ledger.notes = l.notes;
  return r;
}

// ------------------------------------------------------------------- JSON

void to_json(json& j, const WitnessSummary& w) { j = json{{"index", w.index}, {"point", w.point}, {"value", w.value}}; }
void from_json(const json& j, WitnessSummary& w) {
  j.at("index").get_to(w.index);
  j.at("point").get_to(w.point);
  j.at("value").get_to(w.value);
}

void to_json(json& j, const ConditionSummary& c) {
  j = json{{"id", c.id}, {"passed", c.passed}, {"witness", nullptr}};
  if (c.witness) j["witness"] = *c.witness;
}
void from_json(const json& j, ConditionSummary& c) {
  j.at("id").get_to(c.id);
  j.at("passed").get_to(c.passed);
  c.witness.reset();
  if (j.contains("witness") && !j.at("witness").is_null()) c.witness = j.at("witness").get<WitnessSummary>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RankSummary, determinant, sampled_values, vanishing_points, note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LedgerSummary, readings, checks, notes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FieldDump, shape, entries)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OracleSummary, passed, tolerance, completed, skipped, max_curvature_deviation,
                                   max_torsion)

std::string serialize(const Report& r) {
  json j{
      {"schema_version", r.schema_version},
      {"tool_version", r.tool_version},
      {"input", r.input},
      {"dimension", r.dimension},
      {"verdict", r.verdict},
      {"probable", r.probable},
      {"summary", r.summary},
      {"failing", r.failing},
      {"conditions", r.conditions},
      {"rank", r.rank},
      {"ledger", r.ledger},
  };
  if (r.name) j["name"] = *r.name;
  if (r.invariants) j["invariants"] = *r.invariants;
  if (r.oracle) j["oracle"] = *r.oracle;
  if (r.timings) j["timings"] = *r.timings;
  return j.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    Report r;
    j.at("schema_version").get_to(r.schema_version);
    if (r.schema_version != kReportSchemaVersion) throw std::runtime_error("unsupported report schema version");
    j.at("tool_version").get_to(r.tool_version);
    j.at("input").get_to(r.input);
    j.at("dimension").get_to(r.dimension);
    j.at("verdict").get_to(r.verdict);
    j.at("probable").get_to(r.probable);
    j.at("summary").get_to(r.summary);
    j.at("failing").get_to(r.failing);
    j.at("conditions").get_to(r.conditions);
    j.at("rank").get_to(r.rank);
    j.at("ledger").get_to(r.ledger);
    if (j.contains("name")) r.name = j.at("name").get<std::string>();
    if (j.contains("invariants")) r.invariants = j.at("invariants").get<std::map<std::string, FieldDump>>();
    if (j.contains("oracle")) r.oracle = j.at("oracle").get<OracleSummary>();
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "system: " << r.input;
  if (r.name) os << " (" << *r.name << ")";
  os << ", m = " << r.dimension << "\n";
  os << "verdict: " << r.verdict << "\n" << r.summary << "\n\n";
  for (const auto& c : r.conditions) {
    os << "  condition " << c.id << ": " << (c.passed ? "pass" : "FAIL") << "\n";
    if (c.witness) {
      os << "    witness entry (";
      for (std::size_t n = 0; n < c.witness->index.size(); ++n) os << (n ? "," : "") << c.witness->index[n];
      os << ") = " << c.witness->value << " at";
      for (const auto& [var, value] : c.witness->point) os << " " << var << "=" << value;
      os << "\n";
    }
  }
  os << "\n  det(I4) = " << r.rank.determinant << "\n  " << r.rank.note << " (" << r.rank.vanishing_points
     << " of " << r.rank.sampled_values.size() << " sampled points vanish)\n";
  os << "\nreadings:";
  for (const auto& [k, v] : r.ledger.readings) os << " " << k << "=" << v;
  os << "\nledger:\n";
  for (const auto& [k, v] : r.ledger.checks) os << "  " << k << ": " << (v ? "yes" : "no") << "\n";
  for (const auto& n : r.ledger.notes) os << "  note: " << n << "\n";
  if (r.oracle) {
    os << "\nnumeric oracle: " << (r.oracle->passed ? "pass" : "FAIL") << " (" << r.oracle->completed
       << " trajectories, " << r.oracle->skipped << " skipped, max curvature deviation "
       << r.oracle->max_curvature_deviation << ", max torsion " << r.oracle->max_torsion << ")\n";
  }
  if (r.invariants) {
    os << "\ninvariants:\n";
    for (const auto& [name, dump] : *r.invariants) {
      for (const auto& [idx, value] : dump.entries) os << "  " << name << "[" << idx << "] = " << value << "\n";
    }
  }
  if (r.timings) {
    os << "\ntimings (s):";
    for (const auto& [k, v] : *r.timings) os << " " << k << "=" << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace confgeo
