#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fig/dig.hpp"
#include "fig/digest.hpp"
#include "fig/distance.hpp"
#include "fig/embed.hpp"
#include "fig/evaluate.hpp"
#include "fig/simulate.hpp"

namespace fig {

// Flat key=value configuration with section prefixes (windows.l1=10).
// Unknown keys are rejected; serialization is sorted and stable, and its
// SHA-256 keys the distance cache.
struct PipelineConfig {
  std::string basis_family = "fourier";
  int basis_b = 7;

  int l1 = 10;
  int l2 = 10;
  int stride = 1;

  int fpca_k = 0;  // 0 = keep all components
  std::string fpca_normalization = "exp";

  int dig_bins = 20;

  int embed_knn = 5;
  double embed_alpha = 40.0;
  int embed_t_override = 0;
  int embed_t_max = 100;
  int embed_r = 2;
  double embed_mds_tol = 1e-6;
  int embed_mds_max_iter = 500;

  std::string method = "fig";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  int simulate_n = 1000;
  double simulate_sigma_step = 0.01;
  double simulate_sigma_noise = 0.0;

  std::vector<double> sweep_sigma_grid = {0.0, 0.05, 0.10, 0.15};
  std::vector<int> sweep_l2_values = {10, 50, 100, 150, 200};
  int bench_repetitions = 5;

  int surrogate_n_segments = 200;
  int surrogate_segment_length = 32;
  int surrogate_d = 6;

  std::string input_path = "X.csv";
  std::string output_dir = ".";
  std::string cache_dir;  // empty = FIG_CACHE_DIR or default
};

PipelineConfig load_config(const std::string& path);

// Applies one key=value pair; shared by the file parser and CLI overrides.
// Throws InvalidConfig on unknown keys or malformed values.
void apply_key(PipelineConfig* cfg, const std::string& key, const std::string& value);

void validate(const PipelineConfig& cfg);

// Sorted key=value lines; loading the output reproduces the config exactly.
std::string serialize(const PipelineConfig& cfg);

Sha256 config_hash(const PipelineConfig& cfg);

FigConfig to_fig_config(const PipelineConfig& cfg);
DigConfig to_dig_config(const PipelineConfig& cfg);
EmbedConfig to_embed_config(const PipelineConfig& cfg);

}  // namespace fig
