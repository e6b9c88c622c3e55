// End-to-end tests of the command line tool, driven through the binary named
// by the COGMAC_CLI environment variable: outputs, formats, determinism, and
// exit codes.

#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string g_cli;

// Runs the tool with the given arguments, discarding its output; returns the
// process exit code.
int run_cli(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string fresh_dir() {
  char tmpl[] = "/tmp/cogmac_cli_XXXXXX";
  const char* d = mkdtemp(tmpl);
  REQUIRE(d != nullptr);
  return d;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string line;
  std::istringstream ss(text);
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("region writes three frontiers and a manifest") {
  const std::string dir = fresh_dir();
  REQUIRE(run_cli("region --mu 0.5 --rho 0 --out " + dir) == 0);

  for (const char* name : {"outer1.csv", "outer2.csv", "inner.csv"}) {
    CAPTURE(name);
    const std::string text = slurp(dir + "/" + name);
    CHECK(text.find('\r') == std::string::npos);  // LF line endings only
    const std::vector<std::string> rows = lines_of(text);
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == "r1_bits,r2_bits");
    // Frontier order: r1 non-decreasing, r2 non-increasing.
    double prev_r1 = -1.0, prev_r2 = 1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      double r1 = 0, r2 = 0;
      REQUIRE(std::sscanf(rows[i].c_str(), "%lf,%lf", &r1, &r2) == 2);
      CHECK(r1 >= prev_r1 - 1e-12);
      CHECK(r2 <= prev_r2 + 1e-12);
      prev_r1 = r1;
      prev_r2 = r2;
    }
  }

  // Values print with nine significant digits: the constant-power solo cap
  // at these parameters is 0.25 * lg(3).
  CHECK(slurp(dir + "/outer2.csv").find("0.396240625") != std::string::npos);

  const nlohmann::json m = load_json(dir + "/manifest.json");
  CHECK(m.at("command") == "region");
  CHECK(m.at("params").at("mu").get<double>() == 0.5);
  CHECK(m.at("params").at("rho").get<double>() == 0.0);
  CHECK(m.at("params").at("table_mode") == "consistent");
  CHECK(m.at("mode") == "consistent");
  CHECK(m.at("normalization_defect").get<double>() <= 1e-12);
  CHECK(m.at("resolution").get<int>() == 201);
  CHECK(m.at("hausdorff_inner_outer2_bits").get<double>() >= 0.0);

  SUBCASE("reruns are byte-identical") {
    const std::string dir2 = fresh_dir();
    REQUIRE(run_cli("region --mu 0.5 --rho 0 --out " + dir2) == 0);
    for (const char* name :
         {"outer1.csv", "outer2.csv", "inner.csv", "manifest.json"}) {
      CAPTURE(name);
      CHECK(slurp(dir + "/" + name) == slurp(dir2 + "/" + name));
    }
  }
}

TEST_CASE("region reports the as-printed table's normalization defect") {
  const std::string dir = fresh_dir();
  REQUIRE(run_cli("region --mu 0.5 --rho 0.5 --table-mode verbatim --out " +
                  dir) == 0);
  const nlohmann::json m = load_json(dir + "/manifest.json");
  CHECK(m.at("mode") == "verbatim");
  CHECK(std::fabs(m.at("normalization_defect").get<double>() - 0.15625) <=
        1e-12);
}

TEST_CASE("sweep traces the sum rate against the fading variant") {
  const std::string dir = fresh_dir();
  REQUIRE(run_cli("sweep --var mu --from 0 --to 1 --steps 5 --out " + dir) ==
          0);
  const std::vector<std::string> rows = lines_of(slurp(dir + "/sweep.csv"));
  REQUIRE(rows.size() == 6);  // header + 5 points
  CHECK(rows[0] == "x,sum_rate_bits,fading_sum_rate_bits");
  double x = 0, sw = 0, fad = 0;
  REQUIRE(std::sscanf(rows[1].c_str(), "%lf,%lf,%lf", &x, &sw, &fad) == 3);
  CHECK(x == 0.0);
  CHECK(std::fabs(sw - std::log2(3.0)) <= 1e-8);  // always-on endpoint
  REQUIRE(std::sscanf(rows[5].c_str(), "%lf,%lf,%lf", &x, &sw, &fad) == 3);
  CHECK(x == 1.0);
  CHECK(sw == 0.0);  // always-off endpoint
  CHECK(fad == 0.0);
  // The fading variant never does worse than the erasure model.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(std::sscanf(rows[i].c_str(), "%lf,%lf,%lf", &x, &sw, &fad) == 3);
    CHECK(fad >= sw - 1e-12);
  }
  const nlohmann::json m = load_json(dir + "/manifest.json");
  CHECK(m.at("command") == "sweep");
}

TEST_CASE("allocate emits the closed-form split and its cross-check") {
  const std::string dir = fresh_dir();
  REQUIRE(run_cli("allocate --mu 0.5 --rho 0 --p1 1 --p2 1 --out " + dir) ==
          0);
  const nlohmann::json a = load_json(dir + "/allocate.json");
  CHECK(a.at("status") == "ok");
  CHECK(std::fabs(a.at("p1a").get<double>() - 16.0 / 3.0) <= 1e-9);
  CHECK(std::fabs(a.at("p2b").get<double>() - 16.0 / 3.0) <= 1e-9);
  CHECK(a.at("boundary_fallback").get<bool>() == false);
  CHECK(std::fabs(a.at("sum_rate_bits").get<double>() - 0.998611879771) <=
        1e-9);
  CHECK(a.at("agreement_abs").get<double>() <= 1e-6);
  const double oracle = a.at("oracle_sum_rate_bits").get<double>();
  CHECK(std::fabs(oracle - a.at("sum_rate_bits").get<double>()) <= 1e-6);

  SUBCASE("an impossible agreement tolerance turns into exit code 4") {
    const std::string dir2 = fresh_dir();
    CHECK(run_cli("allocate --mu 0.5 --rho 0 --agree-tol 1e-18 --out " +
                  dir2) == 4);
  }
}

TEST_CASE("allocate handles a channel that is never heard") {
  const std::string dir = fresh_dir();
  REQUIRE(run_cli("allocate --mu 1 --rho 0 --out " + dir) == 0);
  const nlohmann::json a = load_json(dir + "/allocate.json");
  CHECK(a.at("status") != "ok");  // explanatory status, still exit 0
  CHECK(a.at("p1a").get<double>() == 0.0);
  CHECK(a.at("p2b").get<double>() == 0.0);
  CHECK(a.at("sum_rate_bits").get<double>() == 0.0);
}

TEST_CASE("estimate reports the sandwich verdict deterministically") {
  const std::string dir = fresh_dir();
  REQUIRE(run_cli(
              "estimate --mu 0.5 --rho 0 --n-samples 20000 --seed 3 --out " +
              dir) == 0);
  const nlohmann::json e = load_json(dir + "/estimate.json");
  CHECK(e.at("pass").get<bool>());
  CHECK(e.at("margin1_bits").get<double>() >= 0.0);
  CHECK(e.at("margin2_bits").get<double>() >= 0.0);
  CHECK(e.at("sum").at("n_samples").get<long long>() == 20000);
  CHECK(e.at("sum").at("seed").get<unsigned long long>() == 3);
  CHECK(e.at("sum").at("std_err_bits").get<double>() > 0.0);
  CHECK(e.at("states_independent").get<bool>());
  CHECK(e.at("strategy").at("var1").get<double>() == 2.0);

  SUBCASE("reruns are byte-identical") {
    const std::string dir2 = fresh_dir();
    REQUIRE(
        run_cli(
            "estimate --mu 0.5 --rho 0 --n-samples 20000 --seed 3 --out " +
            dir2) == 0);
    CHECK(slurp(dir + "/estimate.json") == slurp(dir2 + "/estimate.json"));
  }
  SUBCASE("tiny sample counts are rejected as usage errors") {
    CHECK(run_cli("estimate --mu 0.5 --n-samples 100 --out " + fresh_dir()) ==
          2);
  }
}

TEST_CASE("configuration file provides defaults that flags override") {
  const std::string dir = fresh_dir();
  const std::string cfg = dir + "/run.json";
  write_file(cfg, "{\"mu\": 0.5, \"rho\": 0.25}\n");
  REQUIRE(run_cli("region --config " + cfg + " --mu 0.3 --out " + dir) == 0);
  const nlohmann::json m = load_json(dir + "/manifest.json");
  CHECK(m.at("params").at("mu").get<double>() == 0.3);    // flag wins
  CHECK(m.at("params").at("rho").get<double>() == 0.25);  // file survives

  SUBCASE("unknown keys are usage errors") {
    write_file(cfg, "{\"mu\": 0.5, \"bogus\": 1}\n");
    CHECK(run_cli("region --config " + cfg + " --out " + dir) == 2);
  }
  SUBCASE("an unreadable config file is an I/O error") {
    CHECK(run_cli("region --config " + dir + "/absent.json --out " + dir) ==
          3);
  }
}

TEST_CASE("exit codes") {
  SUBCASE("success paths return 0") {
    CHECK(run_cli("region --mu 0.2 --out " + fresh_dir()) == 0);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("region --help") == 0);
  }
  SUBCASE("usage errors return 2") {
    CHECK(run_cli("") == 2);                      // missing subcommand
    CHECK(run_cli("region --no-such-flag") == 2);
    CHECK(run_cli("region --mu 1.5 --out " + fresh_dir()) == 2);
    CHECK(run_cli("region --table-mode sideways --out " + fresh_dir()) == 2);
    CHECK(run_cli("sweep --var bogus --out " + fresh_dir()) == 2);
    CHECK(run_cli("sweep --steps 1 --out " + fresh_dir()) == 2);
  }
  SUBCASE("output paths that cannot be created return 3") {
    const std::string dir = fresh_dir();
    write_file(dir + "/blocker", "not a directory\n");
    CHECK(run_cli("region --mu 0.2 --out " + dir + "/blocker/sub") == 3);
  }
}

int main(int argc, char** argv) {
  const char* cli = std::getenv("COGMAC_CLI");
  if (cli == nullptr || cli[0] == '\0') {
    std::cerr << "COGMAC_CLI must name the command line binary under test\n";
    return 1;
  }
  g_cli = cli;
  doctest::Context context(argc, argv);
  return context.run();
}
