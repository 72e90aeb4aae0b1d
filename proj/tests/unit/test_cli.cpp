// End-to-end tests of the command-line binary: argument handling, exit
// codes, JSON output, file emission, and byte determinism.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "support/subprocess.hpp"

using nlohmann::json;
using testsupport::read_file;
using testsupport::run_command;
using testsupport::RunResult;
using testsupport::scratch_dir;

namespace {

const std::string kCli = FIBEREIG_CLI_PATH;

RunResult run_cli(const std::string& args) { return run_command(kCli + " " + args); }

}  // namespace

TEST_CASE("cli: single-mode solve emits the full JSON record") {
  const RunResult r = run_cli("lambda --m 0 --b 1.0");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("m") == 0);
  CHECK(j.at("b") == 1.0);
  CHECK(j.at("lambda").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(j.at("converged") == true);
  CHECK(j.contains("n_used"));
  CHECK(j.contains("residual"));
}

TEST_CASE("cli: usage errors exit with 1") {
  CHECK(run_cli("lambda --m 1").exit_code == 1);              // missing --b
  CHECK(run_cli("unknown-subcommand").exit_code == 1);
  CHECK(run_cli("sweep --b 2:1:0.5").exit_code == 1);         // reversed range
  CHECK(run_cli("sweep --b 0:1:0 ").exit_code == 1);          // zero step
  CHECK(run_cli("sweep --b 0:1:0.5 --m 1,2").exit_code == 1); // mode set without 0
  CHECK(run_cli("certify --grid-step 0").exit_code == 1);
  CHECK(run_cli("crossing --m-a 1 --m-b 1").exit_code == 1);
}

TEST_CASE("cli: unconverged solve reports converged=false and exits 2") {
  const RunResult r = run_cli("lambda --m 1 --b 1.9 --n-initial 8 --n-max 8");
  CHECK(r.exit_code == 2);
  const json j = json::parse(r.out);
  CHECK(j.at("converged") == false);
}

TEST_CASE("cli: sweep writes the CSV pair with exact headers") {
  const std::filesystem::path dir = scratch_dir("cli_sweep");
  const RunResult r = run_cli("sweep --b 0:1:0.5 --m 0,1 --out " + dir.string());
  REQUIRE(r.exit_code == 0);

  const std::string sweep_text = read_file(dir / "sweep.csv");
  CHECK(sweep_text.rfind("b,m,lambda,converged,n_used,residual\n", 0) == 0);
  CHECK(std::count(sweep_text.begin(), sweep_text.end(), '\n') == 7);  // header + 3 b x 2 m

  const std::string eff_text = read_file(dir / "effective.csv");
  CHECK(eff_text.rfind("b,e_value,argmin_m\n", 0) == 0);
  CHECK(std::count(eff_text.begin(), eff_text.end(), '\n') == 4);

  SUBCASE("a second run produces byte-identical files") {
    const std::filesystem::path dir2 = scratch_dir("cli_sweep2");
    REQUIRE(run_cli("sweep --b 0:1:0.5 --m 0,1 --out " + dir2.string()).exit_code == 0);
    CHECK(read_file(dir2 / "sweep.csv") == sweep_text);
    CHECK(read_file(dir2 / "effective.csv") == eff_text);
    std::filesystem::remove_all(dir2);
  }

  SUBCASE("--svg adds the plot file") {
    const RunResult rs = run_cli("sweep --b 0:1:0.5 --m 0,1 --svg --out " + dir.string());
    REQUIRE(rs.exit_code == 0);
    const std::string svg = read_file(dir / "sweep.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: mode ranges accept the LO:HI form") {
  const std::filesystem::path dir = scratch_dir("cli_modes");
  const RunResult r = run_cli("sweep --b 0.5 --m=-1:1 --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const std::string text = read_file(dir / "sweep.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + modes -1, 0, 1
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: effective at one field strength prints the per-mode table") {
  const RunResult r = run_cli("effective --b 1.9");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("argmin_m") == 1);
  CHECK(j.at("e_value").get<double>() == doctest::Approx(0.6285515089296548).epsilon(1e-9));
  CHECK(j.at("per_mode").is_array());
  CHECK(j.at("per_mode").size() >= 3);
}

TEST_CASE("cli: effective over a grid writes effective.csv") {
  const std::filesystem::path dir = scratch_dir("cli_eff");
  const RunResult r = run_cli("effective --b 0:1:0.5 --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const std::string text = read_file(dir / "effective.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: crossing locates the curve intersection") {
  const RunResult r = run_cli("crossing");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("b0").get<double>() == doctest::Approx(1.6746516448502284).epsilon(1e-6));
  CHECK(j.at("gap").get<double>() <= 1e-7);
  CHECK(j.at("bracket")[1].get<double>() == doctest::Approx(1.6976527).epsilon(1e-6));
  const double final_lo = j.at("final_bracket")[0].get<double>();
  const double final_hi = j.at("final_bracket")[1].get<double>();
  CHECK(final_hi - final_lo <= 1e-8);
  CHECK(final_lo <= j.at("b0").get<double>());

  CHECK(run_cli("crossing --bracket 0.1:0.5").exit_code == 2);  // no sign change
}

TEST_CASE("cli: derivative matches the closed forms") {
  const RunResult r0 = run_cli("derivative --m 0 --b 1.7");
  REQUIRE(r0.exit_code == 0);
  CHECK(json::parse(r0.out).at("dlambda_db").get<double>() == doctest::Approx(0.85).epsilon(1e-12));

  const RunResult r1 = run_cli("derivative --m 1 --b 1.5");
  REQUIRE(r1.exit_code == 0);
  CHECK(json::parse(r1.out).at("dlambda_db").get<double>() ==
        doctest::Approx(-0.45845594968814574).epsilon(1e-8));
}

TEST_CASE("cli: classify reports exponents, verdicts, and exact coefficients") {
  const RunResult r = run_cli("classify --m 1 --b 0.5");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("indicial_exponents")[0].get<double>() == doctest::Approx(1.5));
  CHECK(j.at("indicial_exponents")[1].get<double>() == doctest::Approx(-0.5));
  for (const json& ep : j.at("endpoints")) CHECK(ep.at("verdict") == "limit_point");
  CHECK(j.at("series_plus").at("symbolic")[1] == "-1/3*b");
  CHECK(j.at("series_minus").at("resonance_order") == 2);
  CHECK(j.at("series_minus").at("symbolic")[1] == "b");

  const RunResult r0 = run_cli("classify --m 0 --b 0.5");
  REQUIRE(r0.exit_code == 0);
  const json j0 = json::parse(r0.out);
  for (const json& ep : j0.at("endpoints")) {
    CHECK(ep.at("verdict") == "limit_circle");
    CHECK(ep.at("log_case") == true);
  }
  CHECK_FALSE(j0.contains("series_minus"));
}

TEST_CASE("cli: series emits coefficients on both branches") {
  const RunResult r = run_cli("series --m 1 --b 0.9 --order 4 --symbolic");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("exponent").get<double>() == doctest::Approx(1.5));
  CHECK(j.at("coeffs")[1].get<double>() == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(j.at("symbolic")[1] == "-1/3*b");

  const RunResult rm = run_cli("series --m 1 --b 0.9 --branch minus");
  REQUIRE(rm.exit_code == 0);
  const json jm = json::parse(rm.out);
  CHECK(jm.at("resonance_order") == 2);
  CHECK(jm.at("coeffs").size() == 2);
  CHECK(jm.at("coeffs")[1].get<double>() == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("cli: validate passes and honors NO_COLOR") {
  const RunResult r = run_command("NO_COLOR=1 " + kCli + " validate");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("\033[") == std::string::npos);
}

TEST_CASE("cli: certify fails honestly when the grid stops before the turning point") {
  const std::filesystem::path dir = scratch_dir("cli_cert");
  const RunResult r =
      run_cli("certify --b-max 0.9 --grid-step 0.1 --out " + dir.string());
  CHECK(r.exit_code == 2);
  const json doc = json::parse(read_file(dir / "certify.json"));
  CHECK(doc.at("all_pass") == false);
  bool found = false;
  for (const json& item : doc.at("items"))
    if (item.at("name") == "effective-non-monotonic") {
      found = true;
      CHECK(item.at("pass") == false);
    }
  CHECK(found);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: config file merges under explicit flags") {
  const std::filesystem::path dir = scratch_dir("cli_cfg");
  const std::filesystem::path cfg = dir / "config.json";

  {
    std::ofstream out(cfg);
    out << R"({"n_initial": 8, "n_max": 8})";
  }
  CHECK(run_cli("lambda --m 1 --b 1.9 --config " + cfg.string()).exit_code == 2);
  CHECK(run_cli("lambda --m 1 --b 1.9 --config " + cfg.string() +
                " --n-initial 16 --n-max 1536")
            .exit_code == 0);

  {
    std::ofstream out(cfg);
    out << R"({"n_initial": 8, "unknown_key": 3})";
  }
  CHECK(run_cli("lambda --m 1 --b 1.0 --config " + cfg.string()).exit_code == 1);

  {
    std::ofstream out(cfg);
    out << "{not json";
  }
  CHECK(run_cli("lambda --m 1 --b 1.0 --config " + cfg.string()).exit_code == 1);
  CHECK(run_cli("lambda --m 1 --b 1.0 --config " + (dir / "missing.json").string()).exit_code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: unwritable output directory exits 1") {
  const std::filesystem::path dir = scratch_dir("cli_unwritable");
  const std::filesystem::path blocker = dir / "blocker";
  { std::ofstream out(blocker); out << "x"; }
  const RunResult r = run_cli("sweep --b 0:1:0.5 --m 0 --out " + (blocker / "sub").string());
  CHECK(r.exit_code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: version flag") {
  const RunResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("fibereig") != std::string::npos);
}
