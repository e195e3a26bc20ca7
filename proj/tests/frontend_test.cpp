#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "confgeo/driver.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/oracle.hpp"
#include "confgeo/parser.hpp"
#include "confgeo/invariants.hpp"
#include "confgeo/report.hpp"
#include "test_support.hpp"

using namespace confgeo;
using namespace confgeo::testing;

namespace {

Expr v(VarId id) { return Expr::variable(id); }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_check(args, out, err);
  return {code, out.str(), err.str()};
}

ParseError parse_failure(const std::string& text, int m) {
  try {
    parse_expression(text, m);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for " << text);
  return ParseError("", 0, 0);
}

ParseError system_failure(const std::string& text) {
  try {
    parse_system(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for system text");
  return ParseError("", 0, 0);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("confgeo_test_" + name)).string();
}

}  // namespace

TEST_CASE("parser examples") {
  const Expr circle = parse_expression("3*q1*(p1*q1+p2*q2)/(1+p1^2+p2^2)", 2);
  CHECK(is_zero(circle - circle_system(2).rhs(0)));

  CHECK(normalize(parse_expression("2^3^2", 2)) == RationalForm(512L));
  CHECK(normalize(parse_expression("-p1^2", 2)) == normalize(-(v(VarId::p(1)) * v(VarId::p(1)))));
  CHECK(normalize(parse_expression("8/4/2", 2)) == RationalForm(1L));
  CHECK(normalize(parse_expression("1 - 2 - 3", 2)) == RationalForm(-4L));
  CHECK(normalize(parse_expression("3/4", 2)) == RationalForm(mpq_class(3, 4)));
  CHECK(normalize(parse_expression("p1^-2 * p1^2", 2)) == RationalForm(1L));
  CHECK(normalize(parse_expression(" x *  y2 ", 2)) == normalize(v(VarId::x()) * v(VarId::y(2))));
  CHECK(normalize(parse_expression("q10", 10)) == normalize(v(VarId::q(10))));
}

TEST_CASE("parser errors") {
  CHECK(std::string(parse_failure("q3", 2).what()).find("out of range") != std::string::npos);
  CHECK(std::string(parse_failure("p1^(1/2)", 2).what()).find("non-integer exponent") != std::string::npos);
  CHECK(std::string(parse_failure("p1^q1", 2).what()).find("integer constant") != std::string::npos);
  CHECK(std::string(parse_failure("z1 + 1", 2).what()).find("unknown variable") != std::string::npos);
  CHECK(std::string(parse_failure("1.5", 2).what()).find("rational") != std::string::npos);
  CHECK(std::string(parse_failure("1/0", 2).what()).find("division by zero") != std::string::npos);

  const ParseError open = parse_failure("(p1 + q2", 2);
  CHECK(open.line() == 1);
  CHECK(open.column() == 9);
  CHECK(parse_failure("p1 p2", 2).column() == 4);
  CHECK(parse_failure("", 2).column() == 1);
  CHECK(parse_failure("p1 +", 2).column() == 5);
}

TEST_CASE("property: printed expressions reparse to equal rational functions") {
  std::vector<Expr> exprs;
  for (const char* name : {"circle_m2.ode", "circle_m3.ode", "zero_m2.ode", "linear_p_m2.ode", "cubic_m2.ode"}) {
    const SystemFile f = read_system_file(corpus_path(name));
    for (const auto& e : f.system.rhs()) exprs.push_back(e);
  }
  std::mt19937_64 rng(79);
  for (int n = 0; n < 100; ++n) exprs.push_back(random_expr(rng, 3, 4));
  for (const auto& e : exprs) {
    CHECK(normalize(parse_expression(e.to_string(), 3)) == normalize(e));
  }
}

TEST_CASE("system files") {
  const SystemFile f = parse_system("# name: demo\n# expect: conformal\n\nm = 2  # two equations\nf2 = q1\r\nf1 = 3/2*p2\n");
  CHECK(f.m == 2);
  CHECK(f.name == std::optional<std::string>("demo"));
  CHECK(f.expect == std::optional<std::string>("conformal"));
  CHECK(f.rhs == std::vector<std::string>{"3/2*p2", "q1"});
  CHECK(is_zero(f.system.rhs(0) - parse_expression("3/2*p2", 2)));

  CHECK(system_failure("f1 = 0\nm = 2\n").line() == 1);
  CHECK(system_failure("m = 1\nf1 = 0\n").line() == 1);
  CHECK(system_failure("m = two\n").line() == 1);
  const ParseError missing = system_failure("m = 2\nf1 = 0\n");
  CHECK(std::string(missing.what()).find("f2") != std::string::npos);
  CHECK(system_failure("m = 2\nf1 = 0\nf1 = 1\nf2 = 0\n").line() == 3);
  CHECK(system_failure("m = 2\nf3 = 0\n").line() == 2);
  const ParseError deep = system_failure("m = 2\nf1 = 0\nf2 =   q3\n");
  CHECK(deep.line() == 3);
  CHECK(deep.column() == 8);
  CHECK(system_failure("").line() >= 0);
  CHECK_THROWS_AS(read_system_file(corpus_path("does_not_exist.ode")), std::runtime_error);
}

TEST_CASE("corpus metadata") {
  for (const char* name : {"circle_m2.ode", "circle_m3.ode", "zero_m2.ode", "linear_p_m2.ode", "cubic_m2.ode"}) {
    const SystemFile f = read_system_file(corpus_path(name));
    REQUIRE(f.expect);
    const Verdict v = check_conformal(f.system);
    const bool expect_conformal = f.expect->rfind("conformal", 0) == 0;
    CHECK_MESSAGE(v.conformal == expect_conformal, name);
    if (!expect_conformal) {
      // "not-conformal <first failing component>"
      CHECK(f.expect->substr(std::string("not-conformal ").size()) == v.failing().front());
    }
  }
  CHECK_THROWS_AS(read_system_file(corpus_path("malformed.ode")), ParseError);
}

TEST_CASE("report JSON round trip") {
  const SystemFile cubic = read_system_file(corpus_path("cubic_m2.ode"));
  Report r = make_report(check_conformal(cubic.system), 2, "cubic_m2.ode");
  r.name = cubic.name;
  r.invariants = std::map<std::string, FieldDump>{{"I2", dump_field(invariant_I2(cubic.system))}};
  r.oracle = summarize(numeric_circle_oracle(cubic.system, 3, 1e-6, 0));
  r.timings = std::map<std::string, double>{{"total", 0.125}};
  const std::string text = serialize(r);
  const Report back = parse_report(text);
  CHECK(back == r);
  CHECK(serialize(back) == text);
  CHECK(r.verdict == "not-conformal");
  REQUIRE(r.conditions[0].witness);
  CHECK(r.conditions[0].witness->index.size() == 3);
  CHECK(r.conditions[0].witness->index[0] >= 1);

  const Report plain = make_report(check_conformal(circle_system(2)), 2, "circle");
  CHECK(parse_report(serialize(plain)) == plain);
  CHECK(serialize(plain).find("timings") == std::string::npos);

  CHECK_THROWS_AS(parse_report("{"), std::runtime_error);
  CHECK_THROWS_AS(parse_report("{\"schema_version\": 99}"), std::runtime_error);
}

TEST_CASE("numeric circle oracle examples") {
  const OracleReport circle = numeric_circle_oracle(circle_system(2), 20, 1e-6, 0);
  CHECK(circle.passed);
  CHECK(circle.completed() == 20);

  const OracleReport flat = numeric_circle_oracle(zero_system(2), 20, 1e-6, 0);
  CHECK_FALSE(flat.passed);

  // p = q = 0 gives a straight line: curvature 0 throughout.
  const auto line = integrate(numeric_rhs(circle_system(2)), 2, 0.0, {0.3, -0.2, 0, 0, 0, 0}, 1.0, 200);
  REQUIRE(line);
  double mean = 1, deviation = 1, torsion = 1;
  measure_curve(*line, 2, mean, deviation, torsion);
  CHECK(mean < 1e-12);
  CHECK(deviation < 1e-6);
  CHECK(torsion < 1e-6);

  // A pole on every trajectory: all skipped, reported, not passed.
  const OdeSystem pole = system_of(2, {"1/(x - 1/2)", "0"});
  const OracleReport skipped = numeric_circle_oracle(pole, 2, 1e-6, 0);
  CHECK_FALSE(skipped.passed);
  CHECK(skipped.completed() == 0);
  REQUIRE_FALSE(skipped.trajectories.empty());
  CHECK_FALSE(skipped.trajectories[0].reason.empty());
}

TEST_CASE("CLI exit codes") {
  const Run circle = cli({"check", corpus_path("circle_m2.ode"), "--json"});
  CHECK(circle.code == kExitConformal);
  const Report r = parse_report(circle.out);
  CHECK(r.verdict == "conformal");
  for (const auto& c : r.conditions) CHECK(c.passed);

  const Run zero = cli({"check", corpus_path("zero_m2.ode")});
  CHECK(zero.code == kExitNotConformal);
  CHECK(zero.out.find("failing: rank") != std::string::npos);

  const Run bad = cli({"check", corpus_path("malformed.ode")});
  CHECK(bad.code == kExitInputError);
  CHECK(bad.err.find(":4:") != std::string::npos);

  CHECK(cli({"check", corpus_path("missing.ode")}).code == kExitInputError);
  CHECK(cli({"check"}).code == kExitInputError);
  CHECK(cli({"check", corpus_path("circle_m2.ode"), "--i4-variant", "other"}).code == kExitInputError);
  CHECK(cli({"check", corpus_path("circle_m2.ode"), "--bogus"}).code == kExitInputError);
  CHECK(cli({}).code == kExitInputError);
}

TEST_CASE("CLI flags") {
  const std::string circle = corpus_path("circle_m2.ode");
  const Run numeric = cli({"check", circle, "--json", "--numeric-only"});
  CHECK(numeric.code == kExitConformal);
  CHECK(parse_report(numeric.out).verdict == "probably-conformal");
  CHECK(cli({"check", corpus_path("cubic_m2.ode"), "--numeric-only"}).code == kExitNotConformal);

  const Run intro = cli({"check", circle, "--json", "--i4-variant", "intro", "--d2w3-variant", "a"});
  CHECK(intro.code == kExitConformal);
  const Report ri = parse_report(intro.out);
  CHECK(ri.ledger.readings.at("i4") == "intro");
  CHECK(ri.ledger.readings.at("d2w3") == "a");

  const Run dump = cli({"check", circle, "--json", "--dump-invariants", "--oracle", "--timings"});
  const Report rd = parse_report(dump.out);
  REQUIRE(rd.invariants);
  CHECK(rd.invariants->count("I4.connection") == 1);
  CHECK(rd.invariants->at("I2").shape == "tensor3");
  REQUIRE(rd.oracle);
  CHECK(rd.oracle->passed);
  REQUIRE(rd.timings);
  CHECK(rd.timings->count("total") == 1);

  const std::string out = temp_path("report.json");
  const Run written = cli({"check", circle, "--json", "--out", out});
  CHECK(written.code == kExitConformal);
  CHECK(written.out.empty());
  std::ifstream in(out);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(parse_report(buffer.str()).verdict == "conformal");
  std::filesystem::remove(out);
}

TEST_CASE("property: CLI output is deterministic") {
  for (const char* name : {"circle_m2.ode", "cubic_m2.ode", "zero_m2.ode"}) {
    for (const char* seed : {"0", "12345"}) {
      const std::vector<std::string> args{"check", corpus_path(name), "--json", "--dump-invariants", "--oracle",
                                          "--seed", seed};
      const Run a = cli(args);
      const Run b = cli(args);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
      const Run numeric_a = cli({"check", corpus_path(name), "--json", "--numeric-only", "--seed", seed});
      const Run numeric_b = cli({"check", corpus_path(name), "--json", "--numeric-only", "--seed", seed});
      CHECK(numeric_a.out == numeric_b.out);
    }
  }
}

TEST_CASE("property: oracle and checker agree on the corpus") {
  for (const char* name : {"circle_m2.ode", "circle_m3.ode", "zero_m2.ode", "linear_p_m2.ode", "cubic_m2.ode"}) {
    const OdeSystem sys = read_system_file(corpus_path(name)).system;
    const bool accepted = check_conformal(sys).conformal;
    const bool oracle = numeric_circle_oracle(sys, 20, 1e-6, 0).passed;
    if (accepted) CHECK_MESSAGE(oracle, name);
    if (!oracle) CHECK_MESSAGE(!accepted, name);
  }
}
