#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "config.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "scole/errors.hpp"

using namespace scole;
using namespace scole::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const char* env = std::getenv("SCOLE_TEST_TMP");
  const std::filesystem::path base =
      env != nullptr ? std::filesystem::path(env) : std::filesystem::temp_directory_path() / "scole_cli_tests";
  return base / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string validation_message(const std::string& text) {
  try {
    parse_config(text, "run.yaml", ".");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

// Small enough that a full verify-all takes well under a second.
const char* kSmall = R"(model: combined
n_elements: 4
n_points: 40
T: 6
dt: 0.01
decay_lo: 1
decay_hi: 6
dissipation_steps: 500
passivity_systems: 10
k_modes: 6
)";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("an empty config is the desk fixture") {
    const RunConfig cfg = parse_config("", "empty.yaml", ".");
    CHECK(cfg.model.kind == ModelKind::combined);
    CHECK(cfg.model.n_elements == 16);
    CHECK(cfg.model.a == 1.0);
    CHECK(cfg.s_lo == 2.0);
    CHECK(cfg.seed == 0);
    const RunConfig defaults = parse_config(default_config_yaml(), "defaults.yaml", ".");
    CHECK(defaults.model.kind == cfg.model.kind);
    CHECK(defaults.n_points == cfg.n_points);
  }

  TEST_CASE("negative damping gain names the field and line") {
    const std::string msg = validation_message("model: combined\na: -1\n");
    CHECK(msg.find("run.yaml:2") != std::string::npos);
    CHECK(msg.find("a: must be >= 0") != std::string::npos);
  }

  TEST_CASE("log spacing needs a positive lower frequency") {
    const std::string msg = validation_message("s_lo: 0\n");
    CHECK(msg.find("s_lo") != std::string::npos);
    CHECK(msg.find("log spacing") != std::string::npos);
    CHECK(validation_message("s_lo: 0\nspacing: linear\ns_hi: 10\n").empty());
  }

  TEST_CASE("unknown keys, bad values and syntax errors are located") {
    CHECK(validation_message("model: tmd\nmass: 3\n").find("run.yaml:2: mass: unknown key") !=
          std::string::npos);
    CHECK(validation_message("n_elements: many\n").find("n_elements") != std::string::npos);
    CHECK(validation_message("model: blade\n").find("unknown model 'blade'") != std::string::npos);
    CHECK(validation_message("a: 1\na: 2\n").find("run.yaml:2: a: duplicate key") != std::string::npos);
    CHECK(validation_message("a: [1,\n").find("syntax error") != std::string::npos);
    CHECK(validation_message("rho: {type: cubic}\n").find("unknown type 'cubic'") != std::string::npos);
    CHECK(validation_message("decay_hi: 80\n").find("decay_hi") != std::string::npos);
    CHECK(validation_message("n_elements: 4\n").find("k_modes") != std::string::npos);
  }

  TEST_CASE("short tables are rejected before any computation") {
    const auto dir = scratch("table");
    std::filesystem::create_directories(dir);
    {
      std::ofstream out(dir / "EI.csv");
      out << "x,EI\n0,1\n0.5,1\n1,1\n";
    }
    try {
      parse_config("EI: {type: table, file: EI.csv}\n", "run.yaml", dir);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("need at least 4 * n_elements = 64") != std::string::npos);
    }
  }

  TEST_CASE("numbers use 17 significant digits and a dot") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_number(-2.5e-300) == "-2.5e-300");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "null");
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  }

  TEST_CASE("identical config and seed give byte-identical reports") {
    const RunConfig cfg = parse_config(kSmall, "small.yaml", ".");
    const RunOutcome first = run(Subcommand::verify_all, cfg, kSmall);
    CHECK(first.exit_code == exit_pass);
    emit_report(first, scratch("det1"));

    RunConfig threaded = cfg;
    threaded.threads = 3;
    const RunOutcome second = run(Subcommand::verify_all, threaded, kSmall);
    emit_report(second, scratch("det2"));
    for (const char* name : {"report.json", "scan.csv", "spectrum.csv", "trajectory.csv"}) {
      CAPTURE(name);
      const std::string a = read_file(scratch("det1") / name);
      CHECK_FALSE(a.empty());
      CHECK(a == read_file(scratch("det2") / name));
    }

    RunConfig reseeded = cfg;
    reseeded.seed = 7;
    const RunOutcome third = run(Subcommand::verify_all, reseeded, kSmall);
    CHECK(third.artifacts.at("report.json") != first.artifacts.at("report.json"));
  }

  TEST_CASE("a partial run marks the other checks as not run") {
    const RunConfig cfg = parse_config(kSmall, "small.yaml", ".");
    const RunOutcome out = run(Subcommand::scan, cfg, kSmall);
    const Json& s = out.report["sections"];
    CHECK(s["growth"]["status"] == "pass");
    CHECK(s["assembly"]["status"] == "pass");
    for (const char* name : {"passivity", "dissipation", "conditions", "kernel", "routh_hurwitz",
                             "hydraulic_positivity", "coupling_bound", "spectrum", "decay"}) {
      CAPTURE(name);
      CHECK(s[name]["status"] == "not run");
    }
    CHECK(out.artifacts.count("scan.csv") == 1);
    CHECK(out.artifacts.count("trajectory.csv") == 0);
    CHECK(s["growth"].contains("alpha_fit"));
    CHECK(s["growth"].contains("sigma_min"));
    CHECK(s["growth"]["excluded_points"].empty());
  }

  TEST_CASE("disabled checks are listed with a reason") {
    RunConfig cfg = parse_config(std::string(kSmall) + "check_decay: false\n", "small.yaml", ".");
    const RunOutcome out = run(Subcommand::verify_all, cfg, "");
    CHECK(out.report["sections"]["decay"]["status"] == "not run");
    CHECK(out.report["sections"]["decay"]["reason"] == "disabled in config");
  }

  TEST_CASE("hydraulic verify-all reports positivity and kernel") {
    const std::string text = std::string(kSmall) + "model: hydraulic\n";
    // The key appears twice in this concatenation, which the parser must reject.
    CHECK_THROWS_AS(parse_config(text, "h.yaml", "."), ValidationError);

    std::string hyd = kSmall;
    hyd.replace(hyd.find("combined"), 8, "hydraulic");
    const RunConfig cfg = parse_config(hyd, "h.yaml", ".");
    const RunOutcome out = run(Subcommand::verify_all, cfg, hyd);
    const Json& s = out.report["sections"];
    CHECK(s["hydraulic_positivity"]["status"] == "pass");
    CHECK(s["hydraulic_positivity"]["violations"] == 0);
    CHECK(s["kernel"]["status"] == "pass");
    CHECK(s["kernel"]["dimension"] == 0);
    CHECK(s["routh_hurwitz"]["status"] == "pass");
    CHECK(s["coupling_bound"]["status"] == "pass");
    CHECK(out.exit_code == exit_pass);
  }

  TEST_CASE("a failed check gives the check exit code and still writes the report") {
    const std::string text = std::string(kSmall) + "alpha_max: 0.01\n";
    const RunConfig cfg = parse_config(text, "small.yaml", ".");
    const RunOutcome out = run(Subcommand::scan, cfg, text);
    CHECK(out.exit_code == exit_check_failed);
    CHECK(out.report["status"] == "fail");
    CHECK(out.artifacts.count("report.json") == 1);
  }

  TEST_CASE("assemble exports the generator") {
    const RunConfig cfg = parse_config(kSmall, "small.yaml", ".");
    const RunOutcome out = run(Subcommand::assemble, cfg, kSmall);
    const std::string& a = out.artifacts.at("A.csv");
    CHECK(a.substr(0, a.find('\n')) == "16,16");
    CHECK(out.artifacts.at("labels.csv").find("w(1)") != std::string::npos);
  }
}
