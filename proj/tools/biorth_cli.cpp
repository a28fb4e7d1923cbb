// Command-line runner for the verification suites.
//
//   biorth verify --prop <id> [--config file.json] [--out dir] [--seed N]
//   biorth sweep  [--thetas 1.2,0.8,0.4] [--config file.json] [--out dir] [--seed N]
//   biorth gauss-bonnet [--config file.json] [--out dir] [--seed N]
//
// Each run writes <out>/<prop>.json, .csv (one row per check) and, where
// curves exist, .svg; the sweep additionally writes sweep_table.csv with
// columns theta,s_theta,min_margin.  Exit code 0 iff all checks pass.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "biorth/verify.hpp"

namespace {

biorth::RunConfig load_config(const std::string& path, long long seed_override) {
  biorth::RunConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config: " + path);
    nlohmann::json j;
    in >> j;
    cfg = biorth::config_from_json(j);
  }
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  return cfg;
}

int finish(const biorth::Report& rep, const std::string& out_dir) {
  biorth::report_emit(rep, out_dir);
  for (const auto& c : rep.checks)
    std::printf("[%s] %s: value = %.6g, tol = %.6g%s%s\n", c.pass ? "PASS" : "FAIL",
                c.id.c_str(), c.value, c.tol, c.note.empty() ? "" : "  -- ",
                c.note.c_str());
  std::printf("%s: %s\n", rep.prop.c_str(), rep.all_pass() ? "all checks passed"
                                                           : "FAILURES present");
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical curvature verification on S^2 x S^2 and CP^2 # CP^2-bar"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", prop, thetas_csv;
  long long seed = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config mirroring RunConfig");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the RNG seed");
  };

  CLI::App* verify_cmd = app.add_subcommand("verify", "run one proposition-level suite");
  verify_cmd->add_option("--prop", prop, "proposition id")->required();
  add_common(verify_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "theta sweep with s_theta bisection");
  sweep_cmd->add_option("--thetas", thetas_csv, "comma-separated theta list (descending)");
  add_common(sweep_cmd);

  CLI::App* gb_cmd = app.add_subcommand("gauss-bonnet", "flat torus variation balance");
  add_common(gb_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    biorth::RunConfig cfg = load_config(config_path, seed);
    if (verify_cmd->parsed()) {
      return finish(biorth::verify(prop, cfg), out_dir);
    }
    if (sweep_cmd->parsed()) {
      if (!thetas_csv.empty()) {
        cfg.thetas.clear();
        std::size_t pos = 0;
        while (pos < thetas_csv.size()) {
          std::size_t next = thetas_csv.find(',', pos);
          if (next == std::string::npos) next = thetas_csv.size();
          cfg.thetas.push_back(std::stod(thetas_csv.substr(pos, next - pos)));
          pos = next + 1;
        }
      }
      const biorth::SweepResult res = biorth::sweep_theta(cfg);
      std::filesystem::create_directories(out_dir);
      biorth::write_sweep_table_csv(res.rows,
                                    std::filesystem::path(out_dir) / "sweep_table.csv");
      return finish(res.report, out_dir);
    }
    return finish(biorth::gauss_bonnet(cfg), out_dir);
  } catch (const biorth::UnknownPropositionError& e) {
    std::fprintf(stderr, "error: %s\nknown propositions:", e.what());
    for (const auto& id : biorth::known_propositions()) std::fprintf(stderr, " %s", id.c_str());
    std::fprintf(stderr, "\n");
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
