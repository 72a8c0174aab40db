#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "clagg/clustering.hpp"
#include "clagg/dataset.hpp"
#include "clagg/graph.hpp"
#include "clagg/rydberg.hpp"
#include "clagg/solvers.hpp"
#include "clagg/svgplot.hpp"
#include "clagg/tomlmini.hpp"
#include "clagg/tuner.hpp"
#include "clagg/version.hpp"

namespace clagg {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetConfig {
  std::string source = "blobs";  // "blobs" | "csv"
  std::size_t n_points = 300;
  std::vector<Point2D> centers;
  double stddev = 1.0;
  std::uint64_t seed = 0;
  std::filesystem::path path;  // csv source
};

struct KmeansSpec {
  int k = 2;
  std::uint64_t seed = 0;
  int max_iter = 100;
  double tol = 1e-6;
};
struct DbscanSpec {
  double eps = 1.0;
  int min_samples = 5;
};
struct SpectralSpec {
  int k = 2;
  double gamma = 1.0;
};
using AlgoSpec = std::variant<KmeansSpec, DbscanSpec, SpectralSpec>;

struct RydbergOptions {
  double omega = 0.9552;   // rad/us
  double delta0 = -3.0;    // rad/us
  double t_ns = 3873.0;
  EmulatorParams emu;
};

struct TuneOptions {
  ParamBounds bounds;
  int budget = 10;
  std::uint64_t shots = 200;
};

struct RunConfig {
  std::string name = "run";
  DatasetConfig dataset;
  std::vector<AlgoSpec> clusterings;
  std::vector<std::string> backends;  // brute | sa | rydberg
  bool use_weights = true;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path outdir = "out";
  AnnealSchedule sa;
  RydbergOptions rydberg;
  TuneOptions tune;
};

inline void validate_config(const RunConfig& cfg) {
  if (cfg.clusterings.empty())
    throw ValidationError("config: at least one clustering algorithm required");
  if (cfg.backends.empty())
    throw ValidationError("config: at least one backend required");
  for (const std::string& b : cfg.backends)
    if (b != "brute" && b != "sa" && b != "rydberg")
      throw ValidationError("config: unknown backend '" + b + "'");
  if (cfg.shots < 1) throw ValidationError("config: shots must be >= 1");
  if (cfg.dataset.source == "csv") {
    if (!std::filesystem::exists(cfg.dataset.path))
      throw ValidationError("config: dataset file not found: " +
                            cfg.dataset.path.string());
  } else if (cfg.dataset.source == "blobs") {
    if (cfg.dataset.centers.empty())
      throw ValidationError("config: blobs source needs centers");
    if (!(cfg.dataset.stddev > 0.0))
      throw ValidationError("config: blobs stddev must be > 0");
  } else {
    throw ValidationError("config: unknown dataset source '" + cfg.dataset.source + "'");
  }
}

// ---- TOML -> RunConfig -----------------------------------------------------

namespace detail {

inline std::vector<Point2D> centers_from_toml(const toml::Value& v) {
  std::vector<Point2D> out;
  for (const toml::Value& pair : v.as_array()) {
    const toml::Array& xy = pair.as_array();
    if (xy.size() != 2)
      throw ValidationError("config: each center must be [x, y]");
    out.push_back({xy[0].as_double(), xy[1].as_double()});
  }
  return out;
}

inline AlgoSpec algo_from_table(const toml::Table& t) {
  const std::string algo = t.get_string("algorithm", "");
  if (algo == "kmeans") {
    KmeansSpec s;
    s.k = static_cast<int>(t.get_int("k", s.k));
    s.seed = static_cast<std::uint64_t>(t.get_int("seed", 0));
    s.max_iter = static_cast<int>(t.get_int("max_iter", s.max_iter));
    s.tol = t.get_double("tol", s.tol);
    return s;
  }
  if (algo == "dbscan") {
    DbscanSpec s;
    s.eps = t.get_double("eps", s.eps);
    s.min_samples = static_cast<int>(t.get_int("min_samples", s.min_samples));
    return s;
  }
  if (algo == "spectral") {
    SpectralSpec s;
    s.k = static_cast<int>(t.get_int("k", s.k));
    s.gamma = t.get_double("gamma", s.gamma);
    return s;
  }
  throw ValidationError("config: unknown clustering algorithm '" + algo + "'");
}

}  // namespace detail

inline RunConfig config_from_toml(const toml::Document& doc,
                                  const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.name = doc.root.get_string("name", cfg.name);

  const toml::Table& ds = doc.table("dataset");
  cfg.dataset.source = ds.get_string("source", cfg.dataset.source);
  cfg.dataset.n_points = static_cast<std::size_t>(ds.get_int("n_points", 300));
  cfg.dataset.stddev = ds.get_double("stddev", cfg.dataset.stddev);
  cfg.dataset.seed = static_cast<std::uint64_t>(ds.get_int("seed", 0));
  if (ds.has("centers")) cfg.dataset.centers = detail::centers_from_toml(ds.at("centers"));
  if (ds.has("path")) {
    std::filesystem::path p = ds.at("path").as_string();
    cfg.dataset.path = p.is_absolute() ? p : base_dir / p;
  }

  const auto it = doc.table_arrays.find("clustering");
  if (it != doc.table_arrays.end())
    for (const toml::Table& t : it->second)
      cfg.clusterings.push_back(detail::algo_from_table(t));

  const toml::Table& run = doc.table("run");
  if (run.has("backends"))
    for (const toml::Value& b : run.at("backends").as_array())
      cfg.backends.push_back(b.as_string());
  cfg.use_weights = run.get_bool("use_weights", cfg.use_weights);
  cfg.shots = static_cast<std::uint64_t>(run.get_int("shots", 1000));
  cfg.seed = static_cast<std::uint64_t>(run.get_int("seed", 1));
  {
    std::filesystem::path out = run.get_string("outdir", "out");
    cfg.outdir = out.is_absolute() ? out : base_dir / out;
  }

  const toml::Table& sa = doc.table("sa");
  cfg.sa.sweeps = static_cast<int>(sa.get_int("sweeps", cfg.sa.sweeps));
  cfg.sa.beta_start = sa.get_double("beta_start", cfg.sa.beta_start);
  cfg.sa.beta_end = sa.get_double("beta_end", cfg.sa.beta_end);
  cfg.sa.reads = static_cast<int>(sa.get_int("reads", cfg.sa.reads));

  const toml::Table& ryd = doc.table("rydberg");
  cfg.rydberg.omega = ryd.get_double("omega", cfg.rydberg.omega);
  cfg.rydberg.delta0 = ryd.get_double("delta0", cfg.rydberg.delta0);
  cfg.rydberg.t_ns = ryd.get_double("t_ns", cfg.rydberg.t_ns);
  cfg.rydberg.emu.c6 = ryd.get_double("c6", cfg.rydberg.emu.c6);
  if (ryd.has("blockade_radius_um"))
    cfg.rydberg.emu.blockade_radius_um = ryd.at("blockade_radius_um").as_double();
  cfg.rydberg.emu.min_spacing_um =
      ryd.get_double("min_spacing_um", cfg.rydberg.emu.min_spacing_um);
  cfg.rydberg.emu.dt_ns = ryd.get_double("dt_ns", cfg.rydberg.emu.dt_ns);
  cfg.rydberg.emu.max_restarts =
      static_cast<int>(ryd.get_int("max_restarts", cfg.rydberg.emu.max_restarts));
  cfg.rydberg.emu.embed_seed =
      static_cast<std::uint64_t>(ryd.get_int("embed_seed", cfg.rydberg.emu.embed_seed));

  const toml::Table& tune = doc.table("tune");
  cfg.tune.budget = static_cast<int>(tune.get_int("budget", cfg.tune.budget));
  cfg.tune.shots = static_cast<std::uint64_t>(tune.get_int("shots", cfg.tune.shots));
  const auto bounds_pair = [&](const std::string& key,
                               std::pair<double, double> dflt) {
    if (!tune.has(key)) return dflt;
    const toml::Array& a = tune.at(key).as_array();
    if (a.size() != 2) throw ValidationError("config: " + key + " must be [low, high]");
    return std::make_pair(a[0].as_double(), a[1].as_double());
  };
  cfg.tune.bounds.omega = bounds_pair("omega_bounds", cfg.tune.bounds.omega);
  cfg.tune.bounds.delta0 = bounds_pair("delta0_bounds", cfg.tune.bounds.delta0);
  cfg.tune.bounds.t_ns = bounds_pair("t_bounds", cfg.tune.bounds.t_ns);

  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  const toml::Document doc = toml::parse_file(path);
  return config_from_toml(doc, path.has_parent_path()
                                   ? path.parent_path()
                                   : std::filesystem::path("."));
}

// ---- pipeline --------------------------------------------------------------

struct BackendReport {
  std::string backend;
  SampleSet samples;
  BestSample best;
  DecodedClustering decoded;
  std::map<int, double> histogram;
};

struct RunReport {
  std::string version = kVersion;
  RunConfig config;
  Dataset dataset;
  std::vector<Clustering> clusterings;
  std::vector<SilhouetteResult> silhouettes;
  ClusterSet cluster_set;
  OverlapGraph graph;
  std::optional<Register> atom_register;
  std::vector<BackendReport> backends;
};

namespace detail {

template <typename F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
  }
}

inline Dataset load_dataset(const DatasetConfig& ds) {
  if (ds.source == "csv") return load_csv(ds.path);
  return generate_blobs(ds.n_points, ds.centers, ds.stddev, ds.seed);
}

inline Clustering run_algo(const Dataset& data, const AlgoSpec& spec) {
  return std::visit(
      [&](const auto& s) -> Clustering {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KmeansSpec>)
          return kmeans(data, s.k, s.seed, s.max_iter, s.tol);
        else if constexpr (std::is_same_v<T, DbscanSpec>)
          return dbscan(data, s.eps, s.min_samples);
        else
          return spectral_clustering(data, s.k, s.gamma);
      },
      spec);
}

}  // namespace detail

// Steps 1-3 (classical part): cluster, weigh, unify, build the graph.
// Shared by run/tune so the classical part executes exactly once.
struct ClassicalStage {
  Dataset dataset;
  std::vector<Clustering> clusterings;
  std::vector<SilhouetteResult> silhouettes;
  ClusterSet cluster_set;
  OverlapGraph graph;
};

inline ClassicalStage run_classical(const RunConfig& cfg) {
  ClassicalStage st;
  st.dataset = detail::stage("dataset", [&] { return detail::load_dataset(cfg.dataset); });
  detail::stage("clustering", [&] {
    for (const AlgoSpec& spec : cfg.clusterings)
      st.clusterings.push_back(detail::run_algo(st.dataset, spec));
    return 0;
  });
  detail::stage("silhouette", [&] {
    for (const Clustering& c : st.clusterings)
      st.silhouettes.push_back(silhouette(st.dataset, c));
    return 0;
  });
  st.cluster_set = detail::stage("unify", [&] {
    return unify_labels(st.clusterings, st.silhouettes);
  });
  st.graph = detail::stage("graph", [&] { return build_overlap_graph(st.cluster_set); });
  return st;
}

inline RunReport run_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  RunReport rep;
  rep.config = cfg;

  ClassicalStage st = run_classical(cfg);
  rep.dataset = std::move(st.dataset);
  rep.clusterings = std::move(st.clusterings);
  rep.silhouettes = std::move(st.silhouettes);
  rep.cluster_set = std::move(st.cluster_set);
  rep.graph = std::move(st.graph);

  for (const std::string& backend : cfg.backends) {
    BackendReport br;
    br.backend = backend;
    if (backend == "brute") {
      detail::stage("solver brute", [&] {
        const BruteForceResult res = brute_force_mwis(rep.graph, cfg.use_weights);
        br.samples.backend = "brute";
        br.samples.timing_us = res.timing_us;
        for (const Bitstring& b : res.optima) br.samples.add(b);
        return 0;
      });
    } else if (backend == "sa") {
      detail::stage("solver sa", [&] {
        const QuboMatrix q = build_qubo(rep.graph, cfg.use_weights);
        AnnealSchedule sch = cfg.sa;
        sch.seed = cfg.seed;
        br.samples = simulated_annealing(q, sch);
        return 0;
      });
    } else {  // rydberg
      detail::stage("solver rydberg", [&] {
        const PulseSequence seq = adiabatic_sequence(
            cfg.rydberg.omega, cfg.rydberg.delta0, cfg.rydberg.t_ns);
        RunMisResult res = run_mis(rep.graph, seq, cfg.shots, cfg.seed, cfg.rydberg.emu);
        br.samples = std::move(res.samples);
        rep.atom_register = std::move(res.atom_register);
        return 0;
      });
    }
    br.best = select_best(br.samples, rep.graph);
    br.decoded = decode(br.best.best, rep.cluster_set);
    br.histogram = cluster_count_histogram(br.samples);
    rep.backends.push_back(std::move(br));
  }
  return rep;
}

// ---- report JSON -----------------------------------------------------------

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["name"] = cfg.name;
  nlohmann::ordered_json ds;
  ds["source"] = cfg.dataset.source;
  if (cfg.dataset.source == "csv") {
    ds["path"] = cfg.dataset.path.string();
  } else {
    ds["n_points"] = cfg.dataset.n_points;
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const Point2D& c : cfg.dataset.centers) cs.push_back({c.x, c.y});
    ds["centers"] = cs;
    ds["stddev"] = cfg.dataset.stddev;
    ds["seed"] = cfg.dataset.seed;
  }
  j["dataset"] = ds;
  nlohmann::ordered_json algos = nlohmann::ordered_json::array();
  for (const AlgoSpec& spec : cfg.clusterings) {
    nlohmann::ordered_json a;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, KmeansSpec>) {
            a["algorithm"] = "kmeans";
            a["k"] = s.k;
            a["seed"] = s.seed;
            a["max_iter"] = s.max_iter;
            a["tol"] = s.tol;
          } else if constexpr (std::is_same_v<T, DbscanSpec>) {
            a["algorithm"] = "dbscan";
            a["eps"] = s.eps;
            a["min_samples"] = s.min_samples;
          } else {
            a["algorithm"] = "spectral";
            a["k"] = s.k;
            a["gamma"] = s.gamma;
          }
        },
        spec);
    algos.push_back(a);
  }
  j["clustering"] = algos;
  j["backends"] = cfg.backends;
  j["use_weights"] = cfg.use_weights;
  j["shots"] = cfg.shots;
  j["seed"] = cfg.seed;
  j["sa"] = {{"sweeps", cfg.sa.sweeps},
             {"beta_start", cfg.sa.beta_start},
             {"beta_end", cfg.sa.beta_end},
             {"reads", cfg.sa.reads}};
  j["rydberg"] = {{"omega", cfg.rydberg.omega},
                  {"delta0", cfg.rydberg.delta0},
                  {"t_ns", cfg.rydberg.t_ns},
                  {"c6", cfg.rydberg.emu.c6},
                  {"min_spacing_um", cfg.rydberg.emu.min_spacing_um},
                  {"dt_ns", cfg.rydberg.emu.dt_ns}};
  return j;
}

// canonical = true omits wall-clock fields so identical configs write
// byte-identical reports.
inline nlohmann::ordered_json report_json(const RunReport& rep, bool canonical) {
  nlohmann::ordered_json j;
  j["tool"] = "clagg";
  j["version"] = rep.version;
  j["config"] = config_json(rep.config);

  nlohmann::ordered_json ds;
  ds["name"] = rep.dataset.name;
  ds["n"] = rep.dataset.size();
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const Point2D& p : rep.dataset.points) pts.push_back({p.x, p.y});
  ds["points"] = pts;
  j["dataset"] = ds;

  nlohmann::ordered_json cls = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rep.clusterings.size(); ++i)
    cls.push_back(clustering_json(rep.clusterings[i], &rep.silhouettes[i]));
  j["clusterings"] = cls;

  nlohmann::ordered_json cset = nlohmann::ordered_json::array();
  for (const ClusterInfo& c : rep.cluster_set.clusters)
    cset.push_back({{"label", c.global_label},
                    {"source", c.source},
                    {"size", c.members.size()},
                    {"silhouette_sum", c.silhouette_sum},
                    {"silhouette_avg", c.silhouette_avg}});
  j["cluster_set"] = cset;
  j["graph"] = graph_json(rep.graph);
  if (rep.atom_register) j["register"] = register_json(*rep.atom_register);

  nlohmann::ordered_json backends = nlohmann::ordered_json::array();
  for (const BackendReport& br : rep.backends) {
    nlohmann::ordered_json b;
    b["backend"] = br.backend;
    b["shots"] = br.samples.shots;
    if (!canonical) b["timing_us"] = br.samples.timing_us;
    b["counts"] = sampleset_json(br.samples);
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [k, v] : br.histogram) hist[std::to_string(k)] = v;
    b["cluster_count_histogram"] = hist;
    b["selected"] = {{"bitstring", br.best.best.to_string()},
                     {"empty_valid", br.best.empty_valid},
                     {"weight", br.best.weight},
                     {"cluster_count", br.best.best.count()},
                     {"labels", br.decoded.selected_labels},
                     {"point_labels", br.decoded.point_labels},
                     {"uncovered", br.decoded.uncovered}};
    backends.push_back(b);
  }
  j["backends"] = backends;
  return j;
}

// Writes report.json plus the per-module artifacts next to it; the report's
// "artifacts" array names every file so callers can check them.
inline std::filesystem::path write_report_artifacts(const RunReport& rep,
                                                    const std::filesystem::path& outdir,
                                                    bool canonical = false) {
  std::filesystem::create_directories(outdir);
  nlohmann::ordered_json j = report_json(rep, canonical);

  std::vector<std::string> artifacts;
  for (std::size_t i = 0; i < rep.clusterings.size(); ++i) {
    const std::string stem = "clustering_" + std::to_string(i);
    write_clustering_csv(rep.clusterings[i], outdir / (stem + ".csv"));
    std::ofstream cj(outdir / (stem + ".json"));
    cj << clustering_json(rep.clusterings[i], &rep.silhouettes[i]).dump(2) << '\n';
    artifacts.push_back(stem + ".csv");
    artifacts.push_back(stem + ".json");
  }
  write_edge_list(rep.graph, outdir / "graph_edges.txt");
  artifacts.push_back("graph_edges.txt");
  {
    std::ofstream gj(outdir / "graph.json");
    gj << graph_json(rep.graph).dump(2) << '\n';
    artifacts.push_back("graph.json");
  }
  write_qubo_coo(build_qubo(rep.graph, rep.config.use_weights), outdir / "qubo.coo");
  artifacts.push_back("qubo.coo");
  if (rep.atom_register) {
    std::ofstream rj(outdir / "register.json");
    rj << register_json(*rep.atom_register).dump(2) << '\n';
    artifacts.push_back("register.json");
  }
  for (const BackendReport& br : rep.backends) {
    const std::string fname = "samples_" + br.backend + ".json";
    std::ofstream sj(outdir / fname);
    sj << sampleset_json(br.samples).dump(2) << '\n';
    artifacts.push_back(fname);
  }
  j["artifacts"] = artifacts;

  const std::filesystem::path report_path = outdir / "report.json";
  std::ofstream out(report_path);
  out << j.dump(2) << '\n';
  return report_path;
}

// ---- plots -----------------------------------------------------------------

// Emits <backend>_top20.svg and <backend>_clusters.svg per backend plus one
// dataset scatter colored by the heaviest backend's selected clustering.
inline std::vector<std::filesystem::path> emit_plots(
    const nlohmann::json& report, const std::filesystem::path& outdir) {
  std::filesystem::create_directories(outdir);
  std::vector<std::filesystem::path> files;

  double best_weight = -1.0;
  std::vector<int> best_labels;
  for (const auto& b : report.at("backends")) {
    const std::string backend = b.at("backend").get<std::string>();
    const std::uint64_t shots = b.at("shots").get<std::uint64_t>();

    std::vector<std::pair<std::string, std::uint64_t>> counts;
    for (auto it = b.at("counts").begin(); it != b.at("counts").end(); ++it)
      counts.push_back({it.key(), it.value().get<std::uint64_t>()});
    std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b2) {
      if (a.second != b2.second) return a.second > b2.second;
      return a.first < b2.first;
    });
    std::vector<std::string> labels;
    std::vector<double> values;
    for (std::size_t i = 0; i < counts.size() && i < 20; ++i) {
      labels.push_back(counts[i].first);
      values.push_back(static_cast<double>(counts[i].second) /
                       static_cast<double>(shots));
    }
    const auto top_path = outdir / (backend + "_top20.svg");
    std::ofstream(top_path) << svg::bar_chart(
        backend + ": 20 most frequent bitstrings", labels, values);
    files.push_back(top_path);

    std::vector<std::string> hlabels;
    std::vector<double> hvalues;
    const auto& hist = b.at("cluster_count_histogram");
    for (auto it = hist.begin(); it != hist.end(); ++it) {
      hlabels.push_back(it.key());
      hvalues.push_back(it.value().get<double>());
    }
    const auto hist_path = outdir / (backend + "_clusters.svg");
    std::ofstream(hist_path) << svg::bar_chart(
        backend + ": bitstrings by cluster count", hlabels, hvalues);
    files.push_back(hist_path);

    const auto& sel = b.at("selected");
    if (!sel.at("empty_valid").get<bool>() &&
        sel.at("weight").get<double>() > best_weight) {
      best_weight = sel.at("weight").get<double>();
      best_labels = sel.at("point_labels").get<std::vector<int>>();
    }
  }

  std::vector<Point2D> points;
  for (const auto& p : report.at("dataset").at("points"))
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  if (best_labels.empty()) best_labels.assign(points.size(), -1);
  const auto scatter_path = outdir / "dataset_selected.svg";
  std::ofstream(scatter_path)
      << svg::scatter("dataset, selected clustering", points, best_labels);
  files.push_back(scatter_path);
  return files;
}

// ---- compare ---------------------------------------------------------------

struct CompareOutput {
  std::string text;
  std::string csv;
};

// Side-by-side backend table. "Correct" cluster count is taken from the
// heaviest selected solution across all reports.
inline CompareOutput compare_reports(const std::vector<nlohmann::json>& reports) {
  if (reports.size() < 2)
    throw std::invalid_argument("compare: need at least 2 reports");

  int correct = 0;
  double best_weight = -std::numeric_limits<double>::infinity();
  for (const auto& rep : reports)
    for (const auto& b : rep.at("backends")) {
      const auto& sel = b.at("selected");
      if (!sel.at("empty_valid").get<bool>() &&
          sel.at("weight").get<double>() > best_weight) {
        best_weight = sel.at("weight").get<double>();
        correct = sel.at("cluster_count").get<int>();
      }
    }

  std::ostringstream text, csv;
  csv << "run,backend,timing_us,modal_bitstring,p_correct_count,best_weight\n";
  text << "run          backend   timing_us     modal                p(k=" << correct
       << ")   best_weight\n";
  for (const auto& rep : reports) {
    const std::string run_name = rep.at("config").at("name").get<std::string>();
    for (const auto& b : rep.at("backends")) {
      std::string modal;
      std::uint64_t modal_count = 0;
      for (auto it = b.at("counts").begin(); it != b.at("counts").end(); ++it) {
        const auto c = it.value().get<std::uint64_t>();
        if (c > modal_count || (c == modal_count && it.key() < modal)) {
          modal_count = c;
          modal = it.key();
        }
      }
      double p_correct = 0.0;
      const auto& hist = b.at("cluster_count_histogram");
      if (hist.contains(std::to_string(correct)))
        p_correct = hist.at(std::to_string(correct)).get<double>();
      const std::int64_t timing =
          b.contains("timing_us") ? b.at("timing_us").get<std::int64_t>() : -1;
      const auto& sel = b.at("selected");
      const double w = sel.at("empty_valid").get<bool>()
                           ? 0.0
                           : sel.at("weight").get<double>();
      csv << run_name << ',' << b.at("backend").get<std::string>() << ','
          << timing << ',' << modal << ',' << p_correct << ',' << w << '\n';
      char line[256];
      std::snprintf(line, sizeof(line), "%-12s %-9s %-13lld %-20s %-10.4f %.4f\n",
                    run_name.c_str(), b.at("backend").get<std::string>().c_str(),
                    static_cast<long long>(timing), modal.c_str(), p_correct, w);
      text << line;
    }
  }
  return {text.str(), csv.str()};
}

// ---- tune ------------------------------------------------------------------

struct TuneRunResult {
  TuneResult result;
  double final_score = 0.0;  // best params re-scored over 5 seeds, averaged
};

inline TuneRunResult tune_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  const ClassicalStage st = run_classical(cfg);
  const std::uint64_t eval_seed = cfg.seed;

  const auto objective = [&](const PulseParams& p) {
    return tuner_objective(p, st.graph, cfg.tune.shots, eval_seed, cfg.rydberg.emu);
  };
  TuneRunResult out;
  out.result = optimize(cfg.tune.bounds, cfg.tune.budget, cfg.seed, objective);

  double acc = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s)
    acc += tuner_objective(out.result.best, st.graph, cfg.tune.shots,
                           mix_seed(eval_seed, s), cfg.rydberg.emu);
  out.final_score = acc / 5.0;
  return out;
}

inline void write_tune_trace_csv(const TuneResult& res,
                                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_tune_trace_csv: cannot write " + path.string());
  out << "iter,omega,delta0,T,score\n";
  char buf[160];
  for (const TraceEntry& e : res.trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g\n", e.iter,
                  e.params.omega, e.params.delta0, e.params.t_ns,
                  e.failed ? std::nan("") : e.score);
    out << buf;
  }
}

}  // namespace clagg
