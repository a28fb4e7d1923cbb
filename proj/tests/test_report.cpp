#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biorth/config.hpp"
#include "biorth/report.hpp"
#include "biorth/verify.hpp"

using namespace biorth;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("empty report emits valid JSON with zero checks") {
  Report r;
  r.prop = "empty";
  r.environment = environment_metadata();
  r.config_echo = config_to_json(RunConfig{});
  const fs::path dir = fs::temp_directory_path() / "biorth_report_test";
  report_emit(r, dir);
  const auto j = nlohmann::json::parse(slurp(dir / "empty.json"));
  REQUIRE(j["prop"] == "empty");
  REQUIRE(j["pass"] == true);
  REQUIRE(j["checks"].size() == 0);
}

TEST_CASE("csv has a header row, CRLF endings, and one row per check") {
  Report r;
  r.prop = "fmt";
  r.add("alpha", 1.5, 2.0, true);
  r.add("needs,quoting", -0.25, 0.5, false, "note");
  const fs::path dir = fs::temp_directory_path() / "biorth_report_test";
  report_emit(r, dir);
  const std::string csv = slurp(dir / "fmt.csv");
  REQUIRE(csv.rfind("id,value,tol,pass\r\n", 0) == 0);
  REQUIRE(csv.find("\"needs,quoting\"") != std::string::npos);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);
  REQUIRE(csv.find("alpha,1.5,2,true\r\n") != std::string::npos);
}

TEST_CASE("svg is standalone 1.1 with one polyline per series") {
  Report r;
  r.prop = "plots";
  r.add("x", 0, 0, true);
  for (int s = 0; s < 3; ++s) {
    PlotSeries ps;
    ps.name = "series" + std::to_string(s);
    for (int i = 0; i < 10; ++i) ps.points.push_back({i * 0.1, std::sin(i * 0.3 + s)});
    r.plots.push_back(ps);
  }
  const fs::path dir = fs::temp_directory_path() / "biorth_report_test";
  report_emit(r, dir);
  const std::string svg = slurp(dir / "plots.svg");
  REQUIRE(svg.find("version=\"1.1\"") != std::string::npos);
  REQUIRE(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) { ++count; ++pos; }
  REQUIRE(count == 3);
}

TEST_CASE("emission is byte-stable for identical reports") {
  Report r;
  r.prop = "stable";
  r.add("value", 1.0 / 3.0, 1e-9, true, "w");
  PlotSeries ps;
  ps.name = "s";
  ps.points = {{0.0, 0.1}, {1.0, 0.2}};
  r.plots.push_back(ps);
  r.environment = environment_metadata();
  r.config_echo = config_to_json(RunConfig{});
  const fs::path d1 = fs::temp_directory_path() / "biorth_rep_a";
  const fs::path d2 = fs::temp_directory_path() / "biorth_rep_b";
  report_emit(r, d1);
  report_emit(r, d2);
  for (const char* f : {"stable.json", "stable.csv", "stable.svg"})
    REQUIRE(slurp(d1 / f) == slurp(d2 / f));
}

TEST_CASE("config json round-trips field for field") {
  RunConfig c;
  c.metric = MetricSpec::deformed(0.7, 0.01, 0.25, 0.85);
  c.seed = 987654321;
  c.thetas = {1.0, 0.5};
  c.tol_margin = 3e-6;
  c.quotient_s = 0.07;
  c.bisect_iters = 9;
  const auto j = config_to_json(c);
  const RunConfig back = config_from_json(j);
  REQUIRE(back.metric.family == MetricFamily::deformed);
  REQUIRE(back.metric.t == c.metric.t);
  REQUIRE(back.metric.s == c.metric.s);
  REQUIRE(back.metric.r_in == c.metric.r_in);
  REQUIRE(back.metric.r_out == c.metric.r_out);
  REQUIRE(back.seed == c.seed);
  REQUIRE(back.thetas == c.thetas);
  REQUIRE(back.tol_margin == c.tol_margin);
  REQUIRE(back.quotient_s == c.quotient_s);
  REQUIRE(back.bisect_iters == c.bisect_iters);

  // Partial configs keep defaults for absent keys.
  const RunConfig partial = config_from_json(nlohmann::json::parse(R"({"seed": 7})"));
  REQUIRE(partial.seed == 7);
  REQUIRE(partial.transversal_points == RunConfig{}.transversal_points);

  REQUIRE_THROWS_AS(metric_from_json(nlohmann::json::parse(R"({"family":"weird"})")),
                    std::invalid_argument);
}

TEST_CASE("verify is reproducible to the last digit for a fixed config") {
  RunConfig cfg;
  cfg.diagonal_points = 4;
  const auto a = report_to_json(biorth::verify("hess", cfg)).dump();
  const auto b = report_to_json(biorth::verify("hess", cfg)).dump();
  REQUIRE(a == b);
}

TEST_CASE("config validation rejects nonpositive tolerances and thetas") {
  REQUIRE_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"tol_hess": 0.0})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"thetas": [0.8, -0.1]})")),
                    std::invalid_argument);
}

TEST_CASE("sweep reports the infeasible marker for theta beyond the fiber diameter") {
  RunConfig cfg;
  cfg.thetas = {kMaxPlaneDist + 0.1};
  const SweepResult res = sweep_theta(cfg);
  REQUIRE(res.rows.empty());
  REQUIRE(res.report.checks.size() == 1);
  REQUIRE(res.report.checks[0].pass);
  REQUIRE(res.report.checks[0].id.find("infeasible") != std::string::npos);
}

TEST_CASE("unknown proposition raises the dedicated error") {
  REQUIRE_THROWS_AS(biorth::verify("nope", RunConfig{}), UnknownPropositionError);
}
