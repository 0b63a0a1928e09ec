#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fig/dig.hpp"
#include "fig/distance.hpp"
#include "fig/embed.hpp"
#include "fig/simulate.hpp"
#include "fig/types.hpp"

namespace fig {

struct MantelResult {
  double r = 0.0;
  double p_value = std::numeric_limits<double>::quiet_NaN();  // NaN when n_perm = 0
  int n_perm = 0;
};

// Pearson correlation over the strict upper triangles; the optional
// permutation test jointly permutes rows and columns of `b`.
MantelResult mantel(const DistanceMatrix& a, const DistanceMatrix& b, int n_perm = 0,
                    std::uint64_t seed = 0);

// One sweep observation. `sigma_or_window` is the noise level for the noise
// sweep and the covariance window length for the window sweep.
struct SweepCell {
  std::string method;
  double sigma_or_window = 0.0;
  std::uint64_t seed = 0;
  double mantel_r = 0.0;
  double runtime_s = 0.0;
};

struct SweepSummaryRow {
  std::string method;
  double sigma_or_window = 0.0;
  double mean_r = 0.0;
  double std_r = 0.0;  // sample standard deviation over seeds
};

std::vector<SweepSummaryRow> summarize(const std::vector<SweepCell>& cells);

struct NoiseSweepConfig {
  std::vector<double> sigma_grid = {0.0, 0.05, 0.10, 0.15};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int n = 1000;
  double sigma_step = 0.01;
  FigConfig fig;
  DigConfig dig;
  EmbedConfig embed;
};

struct NoiseSweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepSummaryRow> summary;
};

// For each (sigma, seed): simulate the sphere walk and score how well each
// representation's pairwise distances correlate with the hidden angles —
// raw noisy data directly, FIG and DIG through their embeddings.
NoiseSweepResult noise_sweep(const NoiseSweepConfig& cfg);

// Pairwise agreement of the embeddings across covariance window lengths.
struct RobustnessGrid {
  std::vector<int> window_values;
  Matrix mean_grid;  // mean over seeds of pairwise Mantel r, unit diagonal
  Matrix std_grid;   // per-cell sample standard deviation over seeds
  double summary_mean = 0.0;  // mean over seeds of the off-diagonal mean
  double summary_std = 0.0;
};

struct WindowSweepConfig {
  std::vector<int> l2_values = {10, 50, 100, 150, 200};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  StagedSurrogateConfig surrogate;
  int stride = 0;  // rows kept per stride steps; 0 = surrogate segment length
  FigConfig fig;
  DigConfig dig;
  EmbedConfig embed;
};

struct WindowSweepResult {
  RobustnessGrid fig;
  RobustnessGrid dig;
  // Per-cell rows; mantel_r is the mean agreement of that window's embedding
  // with the other windows' embeddings for the same seed.
  std::vector<SweepCell> cells;
  std::vector<SweepSummaryRow> summary;
};

WindowSweepResult window_sweep(const WindowSweepConfig& cfg);

struct BenchmarkRow {
  std::string method;
  int repetition = 0;
  double seconds = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  double fig_median = 0.0;
  double dig_median = 0.0;
};

// Wall-clock times of the distance stage only (features or histograms
// through the distance matrix), run sequentially.
BenchmarkResult benchmark_distance_stage(const TimeSeries& X, const FigConfig& fig_cfg,
                                         const DigConfig& dig_cfg, int repetitions);

}  // namespace fig
