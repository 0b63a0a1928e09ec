#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "fig/cache.hpp"
#include "fig/config.hpp"
#include "fig/digest.hpp"
#include "fig/distance.hpp"
#include "fig/embed.hpp"
#include "fig/errors.hpp"
#include "fig/evaluate.hpp"
#include "fig/features.hpp"
#include "fig/io.hpp"
#include "fig/simulate.hpp"
#include "fig/svg.hpp"

namespace {

using namespace fig;

// Binds CLI flags to config keys so flags override file values; the raw flag
// text goes through the same parser as the config file.
struct KeyedFlags {
  CLI::App* sub;
  std::string config_path;
  std::deque<std::string> storage;
  std::vector<std::pair<std::string, CLI::Option*>> keyed;

  explicit KeyedFlags(CLI::App* s) : sub(s) {
    sub->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  }

  void flag(const std::string& name, const std::string& key, const std::string& desc) {
    storage.emplace_back();
    keyed.emplace_back(key, sub->add_option(name, storage.back(), desc));
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [key, opt] : keyed)
      if (opt->count()) apply_key(&cfg, key, opt->results().back());
    validate(cfg);
    return cfg;
  }
};

void add_distance_flags(KeyedFlags& kf) {
  kf.flag("--input", "paths.input", "input time-series CSV");
  kf.flag("--method", "method", "fig | dig | euclidean");
  kf.flag("--b", "basis.b", "basis functions per dimension");
  kf.flag("--l1", "windows.l1", "feature window length");
  kf.flag("--l2", "windows.l2", "covariance window length");
  kf.flag("--stride", "windows.stride", "keep every stride-th row");
  kf.flag("--k", "fpca.k", "principal components kept (0 = all)");
  kf.flag("--normalization", "fpca.normalization", "score normalization: exp | inv_sqrt");
  kf.flag("--bins", "dig.bins", "histogram bins per dimension");
  kf.flag("--cache", "paths.cache", "distance cache directory");
}

void add_embed_flags(KeyedFlags& kf) {
  kf.flag("--knn", "embed.knn", "kernel bandwidth neighbor");
  kf.flag("--alpha", "embed.alpha", "kernel decay exponent");
  kf.flag("--t", "embed.t_override", "diffusion time (0 = automatic)");
  kf.flag("--t-max", "embed.t_max", "largest diffusion time considered");
  kf.flag("--r", "embed.r", "embedding dimension");
  kf.flag("--mds-tol", "embed.mds_tol", "SMACOF relative stress tolerance");
  kf.flag("--mds-max-iter", "embed.mds_max_iter", "SMACOF iteration cap");
}

Metadata config_metadata(const PipelineConfig& cfg) {
  Metadata meta;
  std::stringstream ss(serialize(cfg));
  std::string line;
  while (std::getline(ss, line)) {
    const std::size_t eq = line.find('=');
    if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  meta["artifact.config_hash"] = hex(config_hash(cfg));
  return meta;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void apply_cache_dir(const PipelineConfig& cfg) {
  if (!cfg.cache_dir.empty()) setenv("FIG_CACHE_DIR", cfg.cache_dir.c_str(), 1);
}

Sha256 distance_key(const PipelineConfig& cfg, const TimeSeries& X) {
  Sha256Stream s;
  s.update("fig-distance-cache-v1\n");
  s.update("method=" + cfg.method + "\n");
  s.update("windows.l1=" + std::to_string(cfg.l1) + "\n");
  s.update("windows.l2=" + std::to_string(cfg.l2) + "\n");
  s.update("windows.stride=" + std::to_string(cfg.stride) + "\n");
  if (cfg.method == "fig") {
    s.update("basis.family=" + cfg.basis_family + "\n");
    s.update("basis.b=" + std::to_string(cfg.basis_b) + "\n");
    s.update("fpca.k=" + std::to_string(cfg.fpca_k) + "\n");
    s.update("fpca.normalization=" + cfg.fpca_normalization + "\n");
  } else if (cfg.method == "dig") {
    s.update("dig.bins=" + std::to_string(cfg.dig_bins) + "\n");
  }
  s.update("n=" + std::to_string(X.size()) + "\n");
  s.update("d=" + std::to_string(X.dim()) + "\n");
  s.update(X.values.data(), static_cast<std::size_t>(X.values.size()) * sizeof(double));
  return s.finish();
}

struct DistanceOutcome {
  DistanceMatrix D;
  Sha256 key;
  bool cache_hit = false;
};

DistanceOutcome compute_distance(const PipelineConfig& cfg, const TimeSeries& X) {
  apply_cache_dir(cfg);
  DistanceOutcome out;
  out.key = distance_key(cfg, X);
  if (auto cached = try_load_cached(out.key)) {
    out.D = std::move(*cached);
    out.cache_hit = true;
    return out;
  }
  const Method method = method_from_string(cfg.method);
  switch (method) {
    case Method::Fig: out.D = fig_distance_matrix(X, to_fig_config(cfg)); break;
    case Method::Dig: out.D = dig_distance_matrix(X, to_dig_config(cfg)); break;
    case Method::Euclidean: {
      Matrix rows = X.values;
      if (cfg.stride > 1) {
        const std::vector<int> keep = stride_indices(static_cast<int>(rows.rows()), cfg.stride);
        Matrix sub(static_cast<Eigen::Index>(keep.size()), rows.cols());
        for (std::size_t i = 0; i < keep.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = rows.row(keep[i]);
        rows = std::move(sub);
      }
      out.D = euclidean_distance_matrix(rows);
      break;
    }
  }
  store_cached(out.key, out.D);
  return out;
}

std::vector<std::string> strided_labels(const TimeSeries& X, int stride) {
  if (!X.has_labels()) return {};
  if (stride <= 1) return X.labels;
  std::vector<std::string> out;
  for (int i : stride_indices(static_cast<int>(X.size()), stride)) out.push_back(X.labels[static_cast<std::size_t>(i)]);
  return out;
}

DistanceMatrix matrix_as_distances(const Matrix& m) {
  const bool square = m.rows() == m.cols() && m.rows() >= 2;
  if (square) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const bool symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * scale;
    const bool zero_diag = m.diagonal().cwiseAbs().maxCoeff() <= 1e-8 * scale;
    if (symmetric && zero_diag) {
      DistanceMatrix D;
      D.method = Method::Euclidean;
      D.D = m;
      return D;
    }
  }
  return euclidean_distance_matrix(m);
}

int run_simulate(const PipelineConfig& cfg, const std::string& kind, std::uint64_t seed) {
  const std::string& dir = cfg.output_dir;
  Metadata meta = config_metadata(cfg);
  meta["artifact.kind"] = kind;
  meta["artifact.seed"] = std::to_string(seed);
  if (kind == "sphere") {
    const SphereWalk walk = simulate_sphere_walk(cfg.simulate_n, cfg.simulate_sigma_step,
                                                 cfg.simulate_sigma_noise, seed);
    TimeSeries X;
    X.values = walk.X;
    write_timeseries(join_path(dir, "X.csv"), X);
    write_theta(join_path(dir, "theta.csv"), walk.theta);
    meta["artifact.files"] = "X.csv,theta.csv";
  } else if (kind == "surrogate") {
    StagedSurrogateConfig sc;
    sc.n_segments = cfg.surrogate_n_segments;
    sc.segment_length = cfg.surrogate_segment_length;
    sc.d = cfg.surrogate_d;
    sc.seed = seed;
    const StagedSurrogate data = simulate_staged_surrogate(sc);
    write_timeseries(join_path(dir, "X.csv"), data.series);
    meta["artifact.files"] = "X.csv";
  } else {
    throw InvalidConfig("unknown simulation kind '" + kind + "' (expected sphere|surrogate)");
  }
  write_metadata(join_path(dir, "simulate.meta"), meta);
  std::cout << "wrote " << meta["artifact.files"] << " and simulate.meta in " << dir << "\n";
  return 0;
}

int run_distance(const PipelineConfig& cfg, const std::string& out_bin, const std::string& out_csv) {
  const TimeSeries X = load_timeseries(cfg.input_path);
  const DistanceOutcome res = compute_distance(cfg, X);
  if (!out_bin.empty()) write_distance_cache(out_bin, res.D, res.key);
  if (!out_csv.empty()) write_matrix_csv(out_csv, res.D.D);
  Metadata meta = config_metadata(cfg);
  meta["artifact.kind"] = "distance";
  meta["artifact.cache_hash"] = hex(res.key);
  meta["artifact.cache_hit"] = res.cache_hit ? "1" : "0";
  meta["artifact.cache_path"] = cache_path(res.key);
  write_metadata(join_path(cfg.output_dir, "distance.meta"), meta);
  std::cout << "distance " << cfg.method << " n=" << res.D.size() << " cache="
            << (res.cache_hit ? "hit" : "miss") << " key=" << hex(res.key) << "\n";
  return 0;
}

int run_embed(const PipelineConfig& cfg, const std::string& svg_path) {
  const TimeSeries X = load_timeseries(cfg.input_path);
  const DistanceOutcome res = compute_distance(cfg, X);
  const Embedding emb = embed(res.D, to_embed_config(cfg));
  const std::vector<std::string> labels = strided_labels(X, cfg.stride);

  const std::string csv = join_path(cfg.output_dir, "embedding.csv");
  write_embedding_csv(csv, emb, labels);
  Metadata meta = config_metadata(cfg);
  for (const auto& [k, v] : emb.metadata) meta[k.rfind("embed.", 0) == 0 ? k : "artifact." + k] = v;
  meta["artifact.kind"] = "embedding";
  meta["artifact.distance_hash"] = hex(res.key);
  meta["artifact.cache_hit"] = res.cache_hit ? "1" : "0";
  write_metadata(join_path(cfg.output_dir, "embedding.meta"), meta);
  if (!svg_path.empty()) emit_scatter_svg(svg_path, emb, labels);
  std::cout << "embedded n=" << emb.Y.rows() << " r=" << emb.r
            << " t=" << emb.metadata.at("embed.t_selected") << " -> " << csv << "\n";
  return 0;
}

int run_mantel(const std::string& a_path, const std::string& b_path, int perms, std::uint64_t seed) {
  // The time-series loader drops index/label columns, so theta.csv and
  // embedding.csv work directly; a bare square matrix loads unchanged.
  const DistanceMatrix a = matrix_as_distances(load_timeseries(a_path).values);
  const DistanceMatrix b = matrix_as_distances(load_timeseries(b_path).values);
  const MantelResult res = mantel(a, b, perms, seed);
  std::printf("r=%.6f\n", res.r);
  if (perms > 0) std::printf("p=%.6g\n", res.p_value);
  return 0;
}

int run_sweep_noise(const PipelineConfig& cfg) {
  NoiseSweepConfig sc;
  sc.sigma_grid = cfg.sweep_sigma_grid;
  sc.seeds = cfg.seeds;
  sc.n = cfg.simulate_n;
  sc.sigma_step = cfg.simulate_sigma_step;
  sc.fig = to_fig_config(cfg);
  sc.dig = to_dig_config(cfg);
  sc.embed = to_embed_config(cfg);
  const NoiseSweepResult res = noise_sweep(sc);

  const std::string& dir = cfg.output_dir;
  write_sweep_results(join_path(dir, "noise_results.csv"), res.cells);
  write_sweep_timings(join_path(dir, "noise_timings.csv"), res.cells);
  write_sweep_summary(join_path(dir, "noise_summary.csv"), res.summary);
  emit_sweep_svg(join_path(dir, "noise_sweep.svg"), res.summary, "sigma");
  Metadata meta = config_metadata(cfg);
  meta["artifact.kind"] = "noise-sweep";
  meta["artifact.files"] = "noise_results.csv,noise_timings.csv,noise_summary.csv,noise_sweep.svg";
  write_metadata(join_path(dir, "noise_sweep.meta"), meta);
  for (const SweepSummaryRow& row : res.summary)
    std::printf("%-4s sigma=%.3f mean_r=%.4f std_r=%.4f\n", row.method.c_str(), row.sigma_or_window,
                row.mean_r, row.std_r);
  return 0;
}

int run_sweep_window(const PipelineConfig& cfg) {
  WindowSweepConfig wc;
  wc.l2_values = cfg.sweep_l2_values;
  wc.seeds = cfg.seeds;
  wc.surrogate.n_segments = cfg.surrogate_n_segments;
  wc.surrogate.segment_length = cfg.surrogate_segment_length;
  wc.surrogate.d = cfg.surrogate_d;
  wc.stride = cfg.stride > 1 ? cfg.stride : 0;  // 0 = one row per segment
  wc.fig = to_fig_config(cfg);
  wc.dig = to_dig_config(cfg);
  wc.embed = to_embed_config(cfg);
  const WindowSweepResult res = window_sweep(wc);

  const std::string& dir = cfg.output_dir;
  write_sweep_results(join_path(dir, "window_results.csv"), res.cells);
  write_sweep_timings(join_path(dir, "window_timings.csv"), res.cells);
  write_sweep_summary(join_path(dir, "window_summary.csv"), res.summary);
  write_robustness_grid(join_path(dir, "window_grid_fig.csv"), res.fig);
  write_robustness_grid(join_path(dir, "window_grid_dig.csv"), res.dig);
  emit_sweep_svg(join_path(dir, "window_sweep.svg"), res.summary, "l2");
  Metadata meta = config_metadata(cfg);
  meta["artifact.kind"] = "window-sweep";
  meta["artifact.files"] =
      "window_results.csv,window_timings.csv,window_summary.csv,window_grid_fig.csv,window_grid_dig.csv,window_sweep.svg";
  write_metadata(join_path(dir, "window_sweep.meta"), meta);
  std::printf("fig grid mean=%.4f std=%.4f\n", res.fig.summary_mean, res.fig.summary_std);
  std::printf("dig grid mean=%.4f std=%.4f\n", res.dig.summary_mean, res.dig.summary_std);
  return 0;
}

int run_bench(const PipelineConfig& cfg, std::uint64_t seed) {
  StagedSurrogateConfig sc;
  sc.n_segments = cfg.surrogate_n_segments;
  sc.segment_length = cfg.surrogate_segment_length;
  sc.d = cfg.surrogate_d;
  sc.seed = seed;
  const StagedSurrogate data = simulate_staged_surrogate(sc);
  const BenchmarkResult res =
      benchmark_distance_stage(data.series, to_fig_config(cfg), to_dig_config(cfg), cfg.bench_repetitions);
  write_benchmark_csv(join_path(cfg.output_dir, "bench.csv"), res);
  Metadata meta = config_metadata(cfg);
  meta["artifact.kind"] = "bench";
  meta["artifact.seed"] = std::to_string(seed);
  meta["artifact.n_rows"] = std::to_string(data.series.size());
  write_metadata(join_path(cfg.output_dir, "bench.meta"), meta);
  std::printf("fig median=%.3fs dig median=%.3fs ratio=%.2fx (n=%lld, d=%d)\n", res.fig_median,
              res.dig_median, res.dig_median / res.fig_median,
              static_cast<long long>(data.series.size()), cfg.surrogate_d);
  return 0;
}

int run_plot(const std::string& input, const std::string& out) {
  std::vector<std::string> labels;
  const Embedding emb = load_embedding_csv(input, &labels);
  bool any_label = false;
  for (const std::string& s : labels) any_label = any_label || !s.empty();
  emit_scatter_svg(out, emb, any_label ? labels : std::vector<std::string>{});
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional information geometry pipeline"};
  app.require_subcommand(1);
  int exit_code = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate sphere-walk or staged-surrogate data");
  auto sim_kf = std::make_shared<KeyedFlags>(sim);
  sim_kf->flag("--n", "simulate.n", "walk length");
  sim_kf->flag("--sigma", "simulate.sigma_noise", "observation noise s.d.");
  sim_kf->flag("--sigma-step", "simulate.sigma_step", "walk step s.d.");
  sim_kf->flag("--n-segments", "surrogate.n_segments", "surrogate segments");
  sim_kf->flag("--segment-length", "surrogate.segment_length", "samples per segment");
  sim_kf->flag("--d", "surrogate.d", "surrogate channels");
  sim_kf->flag("--out-dir", "paths.output", "output directory");
  auto sim_kind = std::make_shared<std::string>("sphere");
  auto sim_seed = std::make_shared<std::uint64_t>(1);
  sim->add_option("--kind", *sim_kind, "sphere | surrogate");
  sim->add_option("--seed", *sim_seed, "RNG seed");
  sim->callback([sim_kf, sim_kind, sim_seed, &exit_code] {
    exit_code = run_simulate(sim_kf->resolve(), *sim_kind, *sim_seed);
  });

  // distance
  auto* dist = app.add_subcommand("distance", "compute and cache a distance matrix");
  auto dist_kf = std::make_shared<KeyedFlags>(dist);
  add_distance_flags(*dist_kf);
  dist_kf->flag("--out-dir", "paths.output", "output directory");
  auto dist_bin = std::make_shared<std::string>();
  auto dist_csv = std::make_shared<std::string>();
  dist->add_option("--out", *dist_bin, "also write the binary distance file here");
  dist->add_option("--csv", *dist_csv, "also write the matrix as CSV");
  dist->callback([dist_kf, dist_bin, dist_csv, &exit_code] {
    exit_code = run_distance(dist_kf->resolve(), *dist_bin, *dist_csv);
  });

  // embed
  auto* emb = app.add_subcommand("embed", "distance matrix + diffusion embedding");
  auto emb_kf = std::make_shared<KeyedFlags>(emb);
  add_distance_flags(*emb_kf);
  add_embed_flags(*emb_kf);
  emb_kf->flag("--out-dir", "paths.output", "output directory");
  auto emb_svg = std::make_shared<std::string>();
  emb->add_option("--svg", *emb_svg, "also write a scatter SVG here");
  emb->callback([emb_kf, emb_svg, &exit_code] { exit_code = run_embed(emb_kf->resolve(), *emb_svg); });

  // mantel
  auto* man = app.add_subcommand("mantel", "Mantel correlation between two matrices");
  auto man_a = std::make_shared<std::string>();
  auto man_b = std::make_shared<std::string>();
  auto man_perms = std::make_shared<int>(0);
  auto man_seed = std::make_shared<std::uint64_t>(0);
  man->add_option("a", *man_a, "first CSV (distance matrix or point rows)")->required()->check(CLI::ExistingFile);
  man->add_option("b", *man_b, "second CSV")->required()->check(CLI::ExistingFile);
  man->add_option("--perms", *man_perms, "permutation count for the p-value");
  man->add_option("--seed", *man_seed, "permutation RNG seed");
  man->callback([man_a, man_b, man_perms, man_seed, &exit_code] {
    exit_code = run_mantel(*man_a, *man_b, *man_perms, *man_seed);
  });

  // sweep-noise
  auto* sn = app.add_subcommand("sweep-noise", "noise-resilience sweep on the sphere walk");
  auto sn_kf = std::make_shared<KeyedFlags>(sn);
  add_distance_flags(*sn_kf);
  add_embed_flags(*sn_kf);
  sn_kf->flag("--n", "simulate.n", "walk length");
  sn_kf->flag("--sigma-step", "simulate.sigma_step", "walk step s.d.");
  sn_kf->flag("--sigma-grid", "sweep.sigma_grid", "comma-separated noise levels");
  sn_kf->flag("--seeds", "seeds", "comma-separated seeds");
  sn_kf->flag("--out-dir", "paths.output", "output directory");
  sn->callback([sn_kf, &exit_code] { exit_code = run_sweep_noise(sn_kf->resolve()); });

  // sweep-window
  auto* sw = app.add_subcommand("sweep-window", "window-robustness sweep on the staged surrogate");
  auto sw_kf = std::make_shared<KeyedFlags>(sw);
  add_distance_flags(*sw_kf);
  add_embed_flags(*sw_kf);
  sw_kf->flag("--l2-values", "sweep.l2_values", "comma-separated window lengths");
  sw_kf->flag("--seeds", "seeds", "comma-separated seeds");
  sw_kf->flag("--n-segments", "surrogate.n_segments", "surrogate segments");
  sw_kf->flag("--segment-length", "surrogate.segment_length", "samples per segment");
  sw_kf->flag("--d", "surrogate.d", "surrogate channels");
  sw_kf->flag("--out-dir", "paths.output", "output directory");
  sw->callback([sw_kf, &exit_code] { exit_code = run_sweep_window(sw_kf->resolve()); });

  // bench
  auto* bench = app.add_subcommand("bench", "time the distance stage for both methods");
  auto bench_kf = std::make_shared<KeyedFlags>(bench);
  add_distance_flags(*bench_kf);
  bench_kf->flag("--n-segments", "surrogate.n_segments", "surrogate segments");
  bench_kf->flag("--segment-length", "surrogate.segment_length", "samples per segment");
  bench_kf->flag("--d", "surrogate.d", "surrogate channels");
  bench_kf->flag("--repetitions", "bench.repetitions", "timing repetitions");
  bench_kf->flag("--out-dir", "paths.output", "output directory");
  auto bench_seed = std::make_shared<std::uint64_t>(1);
  bench->add_option("--seed", *bench_seed, "surrogate seed");
  bench->callback([bench_kf, bench_seed, &exit_code] {
    exit_code = run_bench(bench_kf->resolve(), *bench_seed);
  });

  // plot
  auto* plot = app.add_subcommand("plot", "render an embedding CSV as an SVG scatter");
  auto plot_in = std::make_shared<std::string>();
  auto plot_out = std::make_shared<std::string>("plot.svg");
  plot->add_option("--input", *plot_in, "embedding CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", *plot_out, "output SVG path");
  plot->callback([plot_in, plot_out, &exit_code] { exit_code = run_plot(*plot_in, *plot_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "fig: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fig: internal error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
