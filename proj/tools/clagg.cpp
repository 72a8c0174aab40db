// Command-line front end: config-driven pipeline runs, chart emission,
// report comparison and pulse tuning.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clagg/pipeline.hpp"
#include "clagg/version.hpp"

namespace fs = std::filesystem;

namespace {

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw clagg::ValidationError("cannot open report: " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

struct RunOverrides {
  std::vector<std::string> backends;
  std::string outdir;
  std::int64_t shots = -1;
  std::int64_t seed = -1;
  int use_weights = -1;  // -1 keep, 0/1 override
  bool canonical = false;
};

void apply_overrides(clagg::RunConfig& cfg, const RunOverrides& ov) {
  if (!ov.backends.empty()) cfg.backends = ov.backends;
  if (!ov.outdir.empty()) cfg.outdir = ov.outdir;
  if (ov.shots >= 0) cfg.shots = static_cast<std::uint64_t>(ov.shots);
  if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.use_weights >= 0) cfg.use_weights = ov.use_weights != 0;
}

int cmd_run(const std::string& config_path, const RunOverrides& ov) {
  clagg::RunConfig cfg = clagg::load_config(config_path);
  apply_overrides(cfg, ov);
  clagg::validate_config(cfg);
  const clagg::RunReport rep = clagg::run_pipeline(cfg);
  const fs::path report_path =
      clagg::write_report_artifacts(rep, cfg.outdir, ov.canonical);
  std::cout << "report: " << report_path.string() << '\n';
  for (const clagg::BackendReport& br : rep.backends) {
    std::cout << "  " << br.backend << ": selected "
              << br.best.best.to_string() << " (weight "
              << br.best.weight << ", " << br.best.best.count()
              << " clusters";
    if (br.best.empty_valid) std::cout << ", no independent sample";
    std::cout << ", " << br.samples.timing_us << " us)\n";
  }
  return 0;
}

int cmd_plots(const std::string& report_path, const std::string& outdir) {
  const nlohmann::json rep = read_json_file(report_path);
  const fs::path out = outdir.empty()
                           ? fs::path(report_path).parent_path() / "plots"
                           : fs::path(outdir);
  const auto files = clagg::emit_plots(rep, out);
  for (const auto& f : files) std::cout << f.string() << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string>& report_paths,
                const std::string& csv_path) {
  std::vector<nlohmann::json> reports;
  for (const std::string& p : report_paths) reports.push_back(read_json_file(p));
  const clagg::CompareOutput cmp = clagg::compare_reports(reports);
  std::cout << cmp.text;
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out << cmp.csv;
    std::cout << "csv: " << csv_path << '\n';
  }
  return 0;
}

int cmd_tune(const std::string& config_path, const RunOverrides& ov, int budget) {
  clagg::RunConfig cfg = clagg::load_config(config_path);
  apply_overrides(cfg, ov);
  if (budget > 0) cfg.tune.budget = budget;
  clagg::validate_config(cfg);
  const clagg::TuneRunResult res = clagg::tune_pipeline(cfg);
  fs::create_directories(cfg.outdir);
  const fs::path trace_path = cfg.outdir / "tune_trace.csv";
  clagg::write_tune_trace_csv(res.result, trace_path);
  nlohmann::ordered_json j;
  j["best"] = {{"omega", res.result.best.omega},
               {"delta0", res.result.best.delta0},
               {"t_ns", res.result.best.t_ns}};
  j["best_score"] = res.result.best_score;
  j["final_score_mean5"] = res.final_score;
  j["evaluations"] = res.result.trace.size();
  const fs::path tuned_path = cfg.outdir / "tuned.json";
  std::ofstream(tuned_path) << j.dump(2) << '\n';
  std::cout << "best omega=" << res.result.best.omega
            << " delta0=" << res.result.best.delta0
            << " T=" << res.result.best.t_ns
            << " score=" << res.result.best_score
            << " (mean5 " << res.final_score << ")\n"
            << "trace: " << trace_path.string() << '\n'
            << "tuned: " << tuned_path.string() << '\n';
  return 0;
}

int cmd_gen_benchmark(const std::string& out_path, std::uint64_t seed) {
  const clagg::Dataset data = clagg::make_benchmark_like(seed);
  clagg::save_csv(data, out_path);
  std::cout << "wrote " << data.size() << " points to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clagg: clustering aggregation via maximum-weight independent sets"};
  app.set_version_flag("--version", std::string(clagg::kVersion));
  app.require_subcommand(1);

  RunOverrides ov;
  std::string config_path, report_path, outdir, csv_path;
  std::vector<std::string> report_paths;
  int budget = 0;
  std::uint64_t gen_seed = 20240788ULL;
  std::string gen_out = "benchmark788.csv";

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--backends", ov.backends, "override backend list (brute|sa|rydberg)")
        ->delimiter(',');
    cmd->add_option("--out", ov.outdir, "override output directory");
    cmd->add_option("--shots", ov.shots, "override shot count");
    cmd->add_option("--seed", ov.seed, "override run seed");
    cmd->add_option("--use-weights", ov.use_weights,
                    "override silhouette weighting (0 or 1)");
  };

  CLI::App* run = app.add_subcommand("run", "run the full pipeline from a config");
  run->add_option("config", config_path, "TOML config file")->required();
  add_overrides(run);
  run->add_flag("--canonical", ov.canonical,
                "omit wall-clock fields for byte-stable reports");

  CLI::App* plots = app.add_subcommand("plots", "emit SVG charts for a report");
  plots->add_option("report", report_path, "report.json from a run")->required();
  plots->add_option("--out", outdir, "output directory (default: <report dir>/plots)");

  CLI::App* compare = app.add_subcommand("compare", "tabulate two or more reports");
  compare->add_option("reports", report_paths, "report.json files")
      ->required()
      ->expected(-2);
  compare->add_option("--csv", csv_path, "also write the table as CSV");

  CLI::App* tune = app.add_subcommand("tune", "search pulse parameters for a config");
  tune->add_option("config", config_path, "TOML config file")->required();
  add_overrides(tune);
  tune->add_option("--budget", budget, "objective evaluation budget");

  CLI::App* gen = app.add_subcommand(
      "gen-benchmark", "regenerate the synthetic 788-point benchmark CSV");
  gen->add_option("--out", gen_out, "output CSV path");
  gen->add_option("--seed", gen_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, ov);
    if (plots->parsed()) return cmd_plots(report_path, outdir);
    if (compare->parsed()) return cmd_compare(report_paths, csv_path);
    if (tune->parsed()) return cmd_tune(config_path, ov, budget);
    if (gen->parsed()) return cmd_gen_benchmark(gen_out, gen_seed);
  } catch (const clagg::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const clagg::toml::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
