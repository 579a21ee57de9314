#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "randseries/cli.hpp"
#include "randseries/io.hpp"

using namespace randseries;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("randseries_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& body = {}) const {
    const auto p = (path / name).string();
    if (!body.empty()) std::ofstream(p) << body;
    return p;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("density run writes grid and diagnostics") {
  TempDir dir;
  const auto data = dir.file("sample.csv", "x\n0.1\n0.25\n0.3\n0.72\n0.9\n");
  const auto out = dir.file("est.csv");
  REQUIRE(run({"density", "--q", "3", "--dim-prior", "geom:0.15:5:12", "--coef-prior", "dirichlet:1.0", "--mc", "200",
               "--seed", "7", "--grid", "11", "--data", data, "--out", out}) == cli::kOk);
  const auto cols = io::read_columns(out, 4);
  CHECK(cols[0].size() == 11);
  const auto diag = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(diag["config"]["seed"] == 7);
  CHECK(diag["config"]["coef_prior"] == "dirichlet:1.0");
  CHECK(diag["dimension_posterior"].size() == 8);
  CHECK(diag["max_stderr"].get<double>() > 0.0);
  CHECK(diag.contains("wall_time_s"));

  const auto again = dir.file("again.csv");
  REQUIRE(run({"density", "--mc", "200", "--seed", "7", "--grid", "11", "--data", data, "--out", again}) == cli::kOk);
  CHECK(slurp(out) == slurp(again));
}

TEST_CASE("exit codes") {
  TempDir dir;
  const auto data = dir.file("sample.csv", "x\n0.1\n0.5\n");
  const auto out = dir.file("o.csv");
  std::string err;
  CHECK(run({"density", "--mc", "1", "--data", data, "--out", out}, &err) == cli::kConfigError);
  CHECK(err.find("--mc") != std::string::npos);
  CHECK(run({"density", "--data", dir.file("missing.csv"), "--out", out}, &err) == cli::kConfigError);
  CHECK(err.find("missing.csv") != std::string::npos);
  CHECK(run({"density", "--dim-prior", "geom:2:1:3", "--data", data, "--out", out}, &err) == cli::kConfigError);
  CHECK(run({"density", "--grid", "1", "--data", data, "--out", out}) == cli::kConfigError);
  CHECK(run({"frobnicate"}) == cli::kConfigError);
  CHECK(run({}) == cli::kConfigError);

  const auto bad = dir.file("bad.csv", "x\n0.1\nabc\n");
  CHECK(run({"density", "--data", bad, "--out", out}, &err) == cli::kConfigError);
  CHECK(err.find("row") != std::string::npos);
  const auto outside = dir.file("outside.csv", "x\n0.1\n1.5\n");
  CHECK(run({"density", "--data", outside, "--out", out}) == cli::kConfigError);

  std::string big = "x\n";
  for (int i = 0; i < 60; ++i) big += std::to_string((i + 0.5) / 60.0) + "\n";
  CHECK(run({"density", "--data", dir.file("big.csv", big), "--out", out}) == cli::kNumericalError);
}

TEST_CASE("regression subcommands") {
  TempDir dir;
  const auto bin = dir.file("bin.csv", "z,x\n0.1,0\n0.4,1\n0.8,1\n");
  const auto out = dir.file("b.csv");
  REQUIRE(run({"binary", "--q", "2", "--dim-prior", "geom:0.3:2:4", "--grid", "5", "--data", bin, "--out", out}) ==
          cli::kOk);
  CHECK(io::read_columns(out, 3)[1].size() == 5);
  const auto pois = dir.file("p.csv", "z,x\n0.1,2\n0.6,0\n");
  REQUIRE(run({"poisson", "--q", "2", "--dim-prior", "geom:0.3:2:4", "--grid", "5", "--data", pois, "--out", out}) ==
          cli::kOk);
  CHECK(run({"poisson", "--data", dir.file("neg.csv", "z,x\n0.1,-2\n"), "--out", out}) == cli::kConfigError);
  CHECK(run({"binary", "--data", dir.file("two.csv", "z,x\n0.1,2\n"), "--out", out}) == cli::kConfigError);

  const auto lr = dir.file("lr.csv", "z,x\n0.1,0.3\n0.5,0.9\n0.9,0.2\n");
  REQUIRE(run({"linreg", "--q", "2", "--dim-prior", "geom:0.3:2:4", "--grid", "6", "--data", lr, "--out", out,
               "--tau2", "2", "--sigma-min", "0.1"}) == cli::kOk);
  CHECK(io::read_columns(out, 2)[0].size() == 6);

  const auto wide = dir.file("fr.csv", "0,0.25,0.5,0.75,1\n1,1,1,1,1\n0,0.25,0.5,0.75,1\n2,1,0,1,2\n");
  const auto resp = dir.file("y.csv", "y\n0.5\n0.2\n0.9\n");
  REQUIRE(run({"funcreg", "--q", "1", "--dim-prior", "fixed:2", "--grid", "4", "--data", wide, "--responses", resp,
               "--out", out}) == cli::kOk);
  const auto diag = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(diag["coarse_time_grid"] == true);  // 5 time points < 4J

  const auto wn = dir.file("wn.csv", "x\n2.0\n0.1\n0.05\n");
  REQUIRE(run({"whitenoise", "--n", "4", "--tau2", "1", "--dim-prior", "uniform:1:3", "--data", wn, "--out", out}) ==
          cli::kOk);
  CHECK(io::read_columns(out, 2)[1].size() == 3);
}

TEST_CASE("spectral subcommand") {
  TempDir dir;
  std::string series = "x\n";
  for (int i = 0; i < 16; ++i) series += std::to_string(std::sin(1.3 * i) + 0.1 * (i % 3)) + "\n";
  const auto out = dir.file("s.csv");
  REQUIRE(run({"spectral", "--mc", "300", "--seed", "2", "--grid", "9", "--data", dir.file("ts.csv", series), "--out",
               out}) == cli::kOk);
  const auto cols = io::read_columns(out, 4);
  for (std::size_t i = 0; i < cols[0].size(); ++i) CHECK(cols[3][i] == doctest::Approx(1.0 / cols[1][i]));
}

TEST_CASE("simulation study is replayable") {
  cli::SimulationConfig cfg;
  cfg.replicates = 1;
  cfg.samples = 100;
  cfg.grid_size = 50;
  const auto a = cli::simulation_study(cfg);
  const auto b = cli::simulation_study(cfg);
  CHECK(a.mse == b.mse);
  CHECK(a.max_std_error == b.max_std_error);
  CHECK(a.first_estimate.mean == b.first_estimate.mean);
  CHECK(std::isfinite(a.median_mse));

  TempDir dir;
  const auto out = dir.file("repro.csv");
  const auto again = dir.file("repro2.csv");
  REQUIRE(run({"repro-section9", "--replicates", "1", "--mc", "100", "--grid", "40", "--out", out}) == cli::kOk);
  REQUIRE(run({"repro-section9", "--replicates", "1", "--mc", "100", "--grid", "40", "--out", again}) == cli::kOk);
  CHECK(slurp(out) == slurp(again));
  auto ja = nlohmann::json::parse(slurp(out + ".json"));
  auto jb = nlohmann::json::parse(slurp(again + ".json"));
  ja.erase("wall_time_s");
  jb.erase("wall_time_s");
  CHECK(ja == jb);
}
