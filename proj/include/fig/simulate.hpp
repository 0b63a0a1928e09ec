#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fig/types.hpp"

namespace fig {

// Elevation keeps this margin away from the poles; the walk reflects there.
constexpr double kElevationMargin = 0.1;

struct SphereWalkConfig {
  int n = 1000;
  // s.d. of each angle increment (radians). Calibrated so that over the
  // default 1000 steps the azimuth stays clear of the 0/2*pi seam (a wrap
  // makes plain Euclidean distances on theta meaningless) and so that raw
  // observation distances lose their correlation with theta as the noise
  // grid tops out, which is the regime the noise sweep studies.
  double sigma_step = 0.01;
  double sigma_noise = 0.0;  // s.d. of the observation noise
  std::uint64_t seed = 0;
};

// Hidden-parameter process: a 2-D angle random walk observed as noisy 3-D
// unit-sphere positions.
struct SphereWalk {
  Matrix theta;  // n x 2: azimuth in [0, 2*pi), elevation in [margin, pi - margin]
  Matrix Y;      // n x 3 clean sphere points
  Matrix X;      // n x 3 noisy observations
  double sigma_step = 0.01;
  double sigma_noise = 0.0;
  std::uint64_t seed = 0;
};

SphereWalk simulate_sphere_walk(const SphereWalkConfig& cfg);
SphereWalk simulate_sphere_walk(int n, double sigma_step, double sigma_noise, std::uint64_t seed);

struct StagedSurrogateConfig {
  int n_segments = 200;
  int segment_length = 32;
  int d = 6;
  std::uint64_t seed = 0;
  Matrix transition;  // 4x4 row-stochastic stage transition matrix; empty = default
};

// Piecewise-stationary 4-stage AR(1) surrogate: the stage switches between
// segments by a Markov chain and sets the AR coefficient, innovation scale,
// and mean level of every channel. Labels are per sample.
struct StagedSurrogate {
  TimeSeries series;
  std::vector<int> stage;  // stage id per sample, 0..3
};

Matrix default_stage_transition();
const std::vector<std::string>& stage_names();
StagedSurrogate simulate_staged_surrogate(const StagedSurrogateConfig& cfg);

}  // namespace fig
