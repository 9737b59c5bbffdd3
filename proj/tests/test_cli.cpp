#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "hydronozzle/commands.hpp"
#include "hydronozzle/config.hpp"
#include "hydronozzle/errors.hpp"
#include "hydronozzle/io.hpp"

using namespace hydronozzle;
using namespace hydronozzle::testing;
using nlohmann::json;

namespace {

ErrorCode parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    validate(parse_config(in, "."));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config accepted");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "[profile]\nkind = quartic_bump\namplitude = 0.2\n[geometry]\nfamily = bump\namplitude = 0.3\ncompact = true\n"
      "[grid]\nny1 = 60\nny2 = 70\ncutoff = 8\n[tolerances]\nflux = 1e-9\n[solver]\nmethod = all\n");
  const auto cfg = parse_config(in, ".");
  CHECK(cfg.profile.kind == "quartic_bump");
  CHECK(cfg.profile.amplitude == 0.2);
  CHECK(cfg.geometry.params.at("compact") == 1.0);
  CHECK(cfg.ny1 == 60);
  CHECK(cfg.ny2 == 70);
  CHECK(cfg.cutoff == 8.0);
  CHECK(cfg.tol.flux == 1e-9);
  CHECK(solver_methods(cfg.solver).size() == 3);
  CHECK_NOTHROW(validate(cfg));
  CHECK(build_geometry(cfg).family() == "bump");
  CHECK(build_profile(cfg).flux() == doctest::Approx(61.0 / 60.0));

  CHECK(parse_error("[grid]\nny1 = 100\nny2 = 10\n") == ErrorCode::ConfigError);
  CHECK(parse_error("[grid]\nny1 = 1.5\n") == ErrorCode::ConfigError);
  CHECK(parse_error("[mystery]\nx = 1\n") == ErrorCode::ConfigError);
  CHECK(parse_error("[profile]\ncolour = red\n") == ErrorCode::ConfigError);
  CHECK(parse_error("[solver]\nmethod = magic\n") == ErrorCode::ConfigError);
  CHECK(parse_error("[tolerances]\nflux = -1\n") == ErrorCode::ConfigError);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ErrorCode::ConfigError) == kExitConfig);
  CHECK(exit_code_for(ErrorCode::OutsideInterior) == kExitConfig);
  CHECK(exit_code_for(ErrorCode::NoConvergence) == kExitSolver);
  CHECK(exit_code_for(ErrorCode::InversionFailure) == kExitSolver);
}

TEST_CASE("solve on the uniform strip") {
  const auto dir = scratch_dir("solve");
  const auto r = run_cli("solve --config " + config_path("strip_constant") + " --out " + (dir / "run").string(), dir);
  REQUIRE(r.exit_code == 0);
  const json s = io::read_json(dir / "run" / "summary.json");
  CHECK(s["c"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s["gamma_bar"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s["shear"]["status"] == "ShearConfirmed");
  const auto flow = io::read_field_csv(dir / "run" / "field.csv");
  CHECK(flow.columns() == 101);
  CHECK(flow.rows() == 101);
}

TEST_CASE("coarse grid is rejected") {
  const auto dir = scratch_dir("coarse");
  const auto r = run_cli("solve --config " + config_path("coarse") + " --out " + (dir / "run").string(), dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("grid too coarse") != std::string::npos);
  const json e = io::read_json(dir / "run" / "error.json");
  CHECK(e["error"]["code"] == "ConfigError");
  CHECK(e["error"]["exit_code"] == 2);
}

TEST_CASE("missing config and bad flags exit 2") {
  const auto dir = scratch_dir("badargs");
  CHECK(run_cli("solve --config /nonexistent.ini --out " + (dir / "a").string(), dir).exit_code == 2);
  CHECK(run_cli("solve --config " + config_path("strip_constant") + " --grid 7by9 --out " + (dir / "b").string(), dir)
            .exit_code == 2);
  CHECK(run_cli("frobnicate", dir).exit_code == 2);
}

TEST_CASE("verify passes on a clean run and names divergence after v2 noise") {
  const auto dir = scratch_dir("verify");
  const std::string cfg = config_path("strip_quartic");
  const auto run = dir / "run";
  REQUIRE(run_cli("solve --config " + cfg + " --out " + run.string(), dir).exit_code == 0);
  const auto ok = run_cli("verify --config " + cfg + " --from " + run.string() + " --out " + run.string(), dir);
  CHECK(ok.exit_code == 0);

  // Inject noise into the v2 column of field.csv.
  const auto noisy = dir / "noisy";
  std::filesystem::create_directories(noisy);
  std::filesystem::copy_file(run / "summary.json", noisy / "summary.json");
  std::istringstream in(slurp(run / "field.csv"));
  std::ofstream out(noisy / "field.csv", std::ios::binary);
  std::string line;
  std::getline(in, line);
  out << line << '\n';
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 1e-6);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells[5] = io::format_number(std::stod(cells[5]) + noise(rng));
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
  }
  out.close();
  const auto bad = run_cli("verify --config " + cfg + " --from " + noisy.string() + " --out " + noisy.string(), dir);
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("residual_divergence") != std::string::npos);
  const json v = io::read_json(noisy / "verify.json");
  bool named = false;
  for (const auto& f : v["failing"]) named = named || f == "residual_divergence";
  CHECK(named);
}

TEST_CASE("non-shear fixture passes residuals and reports shear as not applicable") {
  const auto dir = scratch_dir("fixture");
  const auto r = run_cli("verify --config " + config_path("fixture_nonshear") + " --out " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  const json v = io::read_json(dir / "verify.json");
  bool saw_shear = false;
  for (const auto& c : v["checks"]) {
    const std::string name = c["name"];
    if (name.rfind("residual", 0) == 0) CHECK(c["passed"] == true);
    if (name == "shear") {
      saw_shear = true;
      CHECK(c["applicable"] == false);
    }
  }
  CHECK(saw_shear);
}

TEST_CASE("two runs give byte-identical artifacts") {
  const auto dir = scratch_dir("determinism");
  const std::string cfg = config_path("tanh_widening");
  REQUIRE(run_cli("solve --config " + cfg + " --grid 60x60 --out " + (dir / "a").string(), dir).exit_code == 0);
  REQUIRE(run_cli("solve --config " + cfg + " --grid 60x60 --out " + (dir / "b").string(), dir).exit_code == 0);
  for (const char* f : {"field.csv", "summary.json"}) {
    const auto a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
    CHECK(!a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("trace rejects wall seeds and keeps the rest") {
  const auto dir = scratch_dir("trace");
  const std::string cfg = config_path("strip_constant");
  const auto r = run_cli("trace --config " + cfg + " --seeds \"0,0.5;0,0\" --t-max 5 --out " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  const json s = io::read_json(dir / "trace_summary.json");
  REQUIRE(s["traces"].size() == 2);
  CHECK(s["traces"][0]["phi_drift"].get<double>() <= 1e-12);
  CHECK(s["traces"][1]["error"]["code"] == "OutsideInterior");
  const auto all_bad = run_cli("trace --config " + cfg + " --seeds \"0,0;0,1\" --out " + (dir / "bad").string(), dir);
  CHECK(all_bad.exit_code == 2);
}

TEST_CASE("slice and farfield subcommands") {
  const auto dir = scratch_dir("slice");
  const std::string cfg = config_path("slanted");
  CHECK(run_cli("slice --config " + cfg + " --y1 1.5 --solver all --out " + dir.string(), dir).exit_code == 0);
  const json sl = io::read_json(dir / "slice.json");
  CHECK(sl.dump().find("max_deviation") != std::string::npos);
  CHECK(run_cli("farfield --config " + cfg + " --out " + dir.string(), dir).exit_code == 0);
  const json ff = io::read_json(dir / "farfield.json");
  CHECK(ff["downstream"]["alpha1"].get<double>() == doctest::Approx(2.0));
  CHECK(std::abs(ff["downstream"]["flux_mismatch"].get<double>()) <= 1e-8);
}
