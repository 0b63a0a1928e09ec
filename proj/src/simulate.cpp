#include "fig/simulate.hpp"

#include <cmath>
#include <numbers>

#include "fig/errors.hpp"
#include "fig/rng.hpp"

namespace fig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_azimuth(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

double reflect_elevation(double e) {
  const double lo = kElevationMargin;
  const double hi = std::numbers::pi - kElevationMargin;
  while (e < lo || e > hi) {
    if (e < lo) e = 2 * lo - e;
    if (e > hi) e = 2 * hi - e;
  }
  return e;
}

}  // namespace

SphereWalk simulate_sphere_walk(const SphereWalkConfig& cfg) {
  if (cfg.n < 2) throw InvalidConfig("sphere walk needs at least 2 steps");
  if (cfg.sigma_step < 0 || cfg.sigma_noise < 0) throw InvalidConfig("sigma values must be nonnegative");

  SphereWalk walk;
  walk.sigma_step = cfg.sigma_step;
  walk.sigma_noise = cfg.sigma_noise;
  walk.seed = cfg.seed;
  walk.theta.resize(cfg.n, 2);
  walk.Y.resize(cfg.n, 3);
  walk.X.resize(cfg.n, 3);

  Rng rng(cfg.seed);
  double azimuth = std::numbers::pi;
  double elevation = std::numbers::pi / 2;
  for (int t = 0; t < cfg.n; ++t) {
    if (t > 0) {
      azimuth = wrap_azimuth(azimuth + cfg.sigma_step * rng.normal());
      elevation = reflect_elevation(elevation + cfg.sigma_step * rng.normal());
    }
    walk.theta(t, 0) = azimuth;
    walk.theta(t, 1) = elevation;
    walk.Y(t, 0) = std::sin(elevation) * std::cos(azimuth);
    walk.Y(t, 1) = std::sin(elevation) * std::sin(azimuth);
    walk.Y(t, 2) = std::cos(elevation);
  }
  for (int t = 0; t < cfg.n; ++t)
    for (int c = 0; c < 3; ++c) walk.X(t, c) = walk.Y(t, c) + cfg.sigma_noise * rng.normal();
  return walk;
}

SphereWalk simulate_sphere_walk(int n, double sigma_step, double sigma_noise, std::uint64_t seed) {
  SphereWalkConfig cfg;
  cfg.n = n;
  cfg.sigma_step = sigma_step;
  cfg.sigma_noise = sigma_noise;
  cfg.seed = seed;
  return simulate_sphere_walk(cfg);
}

Matrix default_stage_transition() {
  Matrix T(4, 4);
  T.setConstant(0.15);
  T.diagonal().setConstant(0.55);
  return T;
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"Awake", "REM", "S-1", "S-2"};
  return names;
}

StagedSurrogate simulate_staged_surrogate(const StagedSurrogateConfig& cfg) {
  if (cfg.n_segments < 40) throw InvalidConfig("surrogate needs at least 40 segments");
  if (cfg.segment_length < 1) throw InvalidConfig("segment length must be positive");
  if (cfg.d < 2) throw InvalidConfig("surrogate needs at least 2 channels");
  Matrix T = cfg.transition.size() ? cfg.transition : default_stage_transition();
  if (T.rows() != 4 || T.cols() != 4) throw InvalidConfig("stage transition matrix must be 4x4");
  if ((T.array() < 0).any() || (T.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-6)
    throw InvalidConfig("stage transition matrix must be row-stochastic");

  // Per-stage dynamics: AR coefficient, innovation scale, mean level.
  const double rho[4] = {0.15, 0.55, 0.80, 0.95};
  const double scale[4] = {1.0, 1.2, 0.8, 1.5};
  const double level[4] = {-1.5, -0.5, 0.5, 1.5};

  const int n = cfg.n_segments * cfg.segment_length;
  StagedSurrogate out;
  out.series.values.resize(n, cfg.d);
  out.series.labels.reserve(static_cast<std::size_t>(n));
  out.stage.reserve(static_cast<std::size_t>(n));

  Rng rng(cfg.seed);
  int stage = 0;
  Vector v = Vector::Zero(cfg.d);
  for (int j = 0; j < cfg.d; ++j) v(j) = scale[stage] * rng.normal();

  int t = 0;
  for (int s = 0; s < cfg.n_segments; ++s) {
    if (s > 0) {
      const double u = rng.uniform();
      double acc = 0.0;
      int next = 3;
      for (int k = 0; k < 4; ++k) {
        acc += T(stage, k);
        if (u < acc) {
          next = k;
          break;
        }
      }
      stage = next;
    }
    const double innovation = scale[stage] * std::sqrt(1.0 - rho[stage] * rho[stage]);
    for (int step = 0; step < cfg.segment_length; ++step, ++t) {
      for (int j = 0; j < cfg.d; ++j) {
        v(j) = rho[stage] * v(j) + innovation * rng.normal();
        out.series.values(t, j) = level[stage] + v(j);
      }
      out.series.labels.push_back(stage_names()[static_cast<std::size_t>(stage)]);
      out.stage.push_back(stage);
    }
  }
  return out;
}

}  // namespace fig
