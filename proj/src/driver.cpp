#include "confgeo/driver.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>

#include "confgeo/conditions.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/parser.hpp"
#include "confgeo/report.hpp"

namespace confgeo {

namespace {

struct Flags {
  std::string file;
  bool json = false;
  std::string out;
  bool dump = false;
  std::string i4 = "connection";
  std::string d2w3 = "b";
  std::uint64_t seed = 0;
  bool oracle = false;
  bool numeric_only = false;
  bool timings = false;
};

template <class T>
std::map<std::string, FieldDump> dump_invariants(Analysis<T>& a) {
  auto dump = [](const TensorField<T>& f) {
    if constexpr (std::is_same_v<T, RationalForm>) {
      return dump_field(to_expr_field(f));
    } else {
      return dump_field(f);
    }
  };
  return {
      {"Hx", dump(a.hx())},
      {"H-1", dump(a.hm1())},
      {"H-2.corrected", dump(a.hm2(Hm2Reading::Corrected))},
      {"H-2.literal", dump(a.hm2(Hm2Reading::Literal))},
      {"I2", dump(a.i2())},
      {"W2", dump(a.w2())},
      {"W3", dump(a.w3(CubeMode::Matrix))},
      {"I4.intro", dump(a.i4(I4Variant::Intro))},
      {"I4.connection", dump(a.i4(I4Variant::Connection, Hm2Reading::Corrected))},
  };
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int check(const Flags& flags, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  SystemFile file = read_system_file(flags.file);

  CheckOptions options;
  options.seed = flags.seed;
  options.numeric_only = flags.numeric_only;
  options.readings.i4 = flags.i4 == "intro" ? I4Variant::Intro : I4Variant::Connection;
  options.readings.d2w3 = flags.d2w3 == "a" ? D2W3Variant::A : D2W3Variant::B;

  const Verdict verdict = check_conformal(file.system, options);
  Report report = make_report(verdict, file.m, flags.file);
  report.name = file.name;
  const double analysis_time = seconds_since(start);

  if (flags.dump) {
    if (flags.numeric_only) {
      Analysis<Expr> a(file.system);
      report.invariants = dump_invariants(a);
    } else {
      report.invariants = dump_invariants(*exact_analysis(file.system));
    }
  }
  double oracle_time = 0;
  if (flags.oracle) {
    const auto t0 = std::chrono::steady_clock::now();
    report.oracle = summarize(numeric_circle_oracle(file.system, 20, 1e-6, flags.seed));
    oracle_time = seconds_since(t0);
  }
  if (flags.timings) {
    report.timings = std::map<std::string, double>{
        {"analysis", analysis_time}, {"oracle", oracle_time}, {"total", seconds_since(start)}};
  }

  const std::string text = flags.json ? serialize(report) : render_text(report);
  if (flags.out.empty()) {
    out << text;
  } else {
    std::ofstream file_out(flags.out, std::ios::binary);
    if (!file_out || !(file_out << text)) {
      err << "error: cannot write " << flags.out << "\n";
      return kExitInputError;
    }
  }
  return verdict.conformal ? kExitConformal : kExitNotConformal;
}

}  // namespace

int run_check(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide whether y''' = f(x, y, p, q) is a conformal geodesic system", "confgeo"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Flags flags;
  CLI::App* cmd = app.add_subcommand("check", "analyse a system file");
  cmd->add_option("file", flags.file, "system file")->required();
  cmd->add_flag("--json", flags.json, "emit the JSON report");
  cmd->add_option("--out", flags.out, "write the report to this path");
  cmd->add_flag("--dump-invariants", flags.dump, "include the invariant fields");
  cmd->add_option("--i4-variant", flags.i4, "I4 formula")->check(CLI::IsMember({"intro", "connection"}));
  cmd->add_option("--d2w3-variant", flags.d2w3, "second derivative of W3")->check(CLI::IsMember({"a", "b"}));
  cmd->add_option("--seed", flags.seed, "seed for sample points");
  cmd->add_flag("--oracle", flags.oracle, "also run the numeric circle oracle");
  cmd->add_flag("--numeric-only", flags.numeric_only, "randomized zero tests only (probable verdict)");
  cmd->add_flag("--timings", flags.timings, "record wall-clock timings in the report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitConformal;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitConformal;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    return check(flags, out, err);
  } catch (const ParseError& e) {
    err << flags.file << ":" << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace confgeo
