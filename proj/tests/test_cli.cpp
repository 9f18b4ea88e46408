// End-to-end checks of the pmc binary: exit codes, file outputs, config
// errors. The binary path is injected by the build.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "pmc/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PMC_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WEXITSTATUS(status);
  return r;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("pmc_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("trajectory subcommand writes a parseable CSV") {
  const fs::path out = temp_file("traj.csv");
  const auto r = run_cli(
      "trajectory --sign lorentz --dim 2 --g sin --xi 1.0 --rmax 40 --out " +
      out.string() + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  const auto file = pmc::io::parse_trajectory_csv(in);
  CHECK(file.metadata.at("sign") == "lorentz");
  CHECK(file.samples.size() > 100);
  for (size_t i = 1; i < file.samples.size(); ++i) {
    CHECK(file.samples[i].r > file.samples[i - 1].r);
    CHECK(std::abs(file.samples[i].up) < 1.0);
  }
  fs::remove(out);
}

TEST_CASE("classify subcommand reports the threshold cell") {
  const fs::path out = temp_file("classify.json");
  const auto r = run_cli(
      "classify --sign euclid --dim 1 --g sin --xi 1.5707963267948966 "
      "--rmax 40 --out " +
      out.string() + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  const std::string predicted = j.at("predicted").get<std::string>();
  CHECK((predicted == "theory_boundary" || predicted == "gradient_blowup"));
  CHECK(j.at("observed").get<std::string>() == "gradient_blowup");
  fs::remove(out);
}

TEST_CASE("validate subcommand") {
  const auto r = run_cli("validate --g cubic --range 2 >/dev/null 2>&1");
  CHECK(r.exit_code == 0);
}

TEST_CASE("sweep: clean grid exits 0, boundary-band grid exits 2") {
  const fs::path cfg = temp_file("sweep_ok.json");
  {
    std::ofstream out(cfg);
    out << R"({"signs":["lorentz"],"dimensions":[1],"nonlinearities":["sin"],
               "xi_grid":{"min":0.3,"max":2.7,"count":4},
               "controls":{"r_max":150.0}})";
  }
  const fs::path outp = temp_file("sweep_ok.csv");
  const auto ok = run_cli("sweep --config " + cfg.string() + " --out " +
                          outp.string() + " 2>/dev/null");
  CHECK(ok.exit_code == 0);
  const std::string csv = slurp(outp);
  CHECK(csv.find("disagreements,0") != std::string::npos);
  fs::remove(cfg);
  fs::remove(outp);

  // A height just inside the numerically undecidable band below pi/2: the
  // true orbit is periodic but its gradient exceeds any practical blow-up
  // threshold, so prediction and observation legitimately part ways.
  const fs::path cfg2 = temp_file("sweep_boundary.json");
  {
    std::ofstream out(cfg2);
    out << R"({"signs":["euclidean"],"dimensions":[1],"nonlinearities":["sin"],
               "xi_grid":[1.5707963266948966],
               "controls":{"r_max":60.0}})";
  }
  const fs::path outp2 = temp_file("sweep_boundary.csv");
  const auto dis = run_cli("sweep --config " + cfg2.string() + " --out " +
                           outp2.string() + " 2>/dev/null");
  CHECK(dis.exit_code == 2);
  fs::remove(cfg2);
  fs::remove(outp2);
}

TEST_CASE("error paths exit 1 with a diagnostic") {
  CHECK(run_cli("classify --sign spherical --dim 1 --g sin --xi 1 "
                ">/dev/null 2>&1")
            .exit_code == 1);
  CHECK(run_cli("trajectory --sign lorentz --xi 1 --out "
                "/nonexistent_dir/x.csv >/dev/null 2>&1")
            .exit_code == 1);
  CHECK(run_cli("sweep --config /nonexistent_config.json >/dev/null 2>&1")
            .exit_code == 1);

  const fs::path cfg = temp_file("sweep_bad_key.json");
  {
    std::ofstream out(cfg);
    out << R"({"signs":["lorentz"],"dims":[1],"nonlinearities":["sin"],
               "xi_grid":[1.0]})";
  }
  CHECK(run_cli("sweep --config " + cfg.string() + " >/dev/null 2>&1")
            .exit_code == 1);
  fs::remove(cfg);
}

}  // TEST_SUITE
