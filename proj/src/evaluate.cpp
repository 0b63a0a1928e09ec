#include "fig/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "fig/errors.hpp"
#include "fig/rng.hpp"

namespace fig {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void check_mantel_input(const DistanceMatrix& m, const char* which) {
  const auto& D = m.D;
  if (D.rows() != D.cols()) throw InvalidData(std::string("mantel: ") + which + " matrix is not square");
  if (D.rows() < 4) throw InvalidData("mantel: need at least 4 points");
  const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
  if (D.diagonal().cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InvalidData(std::string("mantel: ") + which + " matrix has a nonzero diagonal");
  if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InvalidData(std::string("mantel: ") + which + " matrix is not symmetric");
}

struct TriangleStats {
  Vector values;
  double mean = 0.0;
  double sd = 0.0;  // sqrt of the population variance
};

TriangleStats upper_triangle(const Matrix& D) {
  const Eigen::Index n = D.rows();
  TriangleStats out;
  out.values.resize(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.values(k++) = D(i, j);
  out.mean = out.values.mean();
  out.sd = std::sqrt((out.values.array() - out.mean).square().sum() / static_cast<double>(k));
  return out;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

MantelResult mantel(const DistanceMatrix& a, const DistanceMatrix& b, int n_perm, std::uint64_t seed) {
  check_mantel_input(a, "first");
  check_mantel_input(b, "second");
  if (a.D.rows() != b.D.rows()) throw InvalidData("mantel: matrices have different sizes");
  if (n_perm < 0) throw InvalidConfig("mantel: permutation count must be nonnegative");

  const TriangleStats ta = upper_triangle(a.D);
  const TriangleStats tb = upper_triangle(b.D);
  if (ta.sd == 0.0 || tb.sd == 0.0)
    throw UndefinedCorrelation("mantel: zero variance in an upper triangle");

  const double m = static_cast<double>(ta.values.size());
  const double cross = ta.values.dot(tb.values) / m;
  const double r = (cross - ta.mean * tb.mean) / (ta.sd * tb.sd);

  MantelResult out;
  out.r = r;
  out.n_perm = n_perm;
  if (n_perm > 0) {
    const Eigen::Index n = a.D.rows();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    int count = 0;
    for (int p = 0; p < n_perm; ++p) {
      rng.shuffle(perm);
      // The multiset of off-diagonal values is unchanged by a joint
      // permutation, so only the cross term needs recomputing.
      double cross_p = 0.0;
      Eigen::Index k = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
          cross_p += ta.values(k++) * b.D(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
      const double r_p = (cross_p / m - ta.mean * tb.mean) / (ta.sd * tb.sd);
      if (r_p >= r) ++count;
    }
    out.p_value = (1.0 + count) / (1.0 + n_perm);
  }
  return out;
}

std::vector<SweepSummaryRow> summarize(const std::vector<SweepCell>& cells) {
  // Preserve first-appearance order of (method, sigma_or_window) groups.
  std::vector<std::pair<std::string, double>> order;
  std::map<std::pair<std::string, double>, std::vector<double>> groups;
  for (const SweepCell& c : cells) {
    const auto key = std::make_pair(c.method, c.sigma_or_window);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(c.mantel_r);
  }
  std::vector<SweepSummaryRow> rows;
  rows.reserve(order.size());
  for (const auto& key : order) {
    const std::vector<double>& v = groups[key];
    SweepSummaryRow row;
    row.method = key.first;
    row.sigma_or_window = key.second;
    row.mean_r = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - row.mean_r) * (x - row.mean_r);
    row.std_r = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

NoiseSweepResult noise_sweep(const NoiseSweepConfig& cfg) {
  if (cfg.sigma_grid.size() < 2) throw InvalidConfig("noise sweep needs at least 2 sigma values");
  if (cfg.seeds.size() < 2) throw InvalidConfig("noise sweep needs at least 2 seeds");

  NoiseSweepResult out;
  const char* methods[] = {"raw", "fig", "dig"};
  for (const char* method : methods) {
    for (double sigma : cfg.sigma_grid) {
      for (std::uint64_t seed : cfg.seeds) {
        const SphereWalk walk = simulate_sphere_walk(cfg.n, cfg.sigma_step, sigma, seed);
        const DistanceMatrix d_theta = euclidean_distance_matrix(walk.theta);
        TimeSeries series;
        series.values = walk.X;

        SweepCell cell;
        cell.method = method;
        cell.sigma_or_window = sigma;
        cell.seed = seed;
        const double start = now_seconds();
        DistanceMatrix rep;
        if (std::string(method) == "raw") {
          rep = euclidean_distance_matrix(walk.X);
        } else {
          DistanceMatrix dist = std::string(method) == "fig" ? fig_distance_matrix(series, cfg.fig)
                                                             : dig_distance_matrix(series, cfg.dig);
          const Embedding emb = embed(dist, cfg.embed);
          rep = euclidean_distance_matrix(emb.Y);
        }
        cell.runtime_s = now_seconds() - start;
        cell.mantel_r = mantel(rep, d_theta).r;
        out.cells.push_back(std::move(cell));
      }
    }
  }
  out.summary = summarize(out.cells);
  return out;
}

WindowSweepResult window_sweep(const WindowSweepConfig& cfg) {
  const std::size_t nw = cfg.l2_values.size();
  if (nw < 2) throw InvalidConfig("window sweep needs at least 2 window values");
  if (cfg.seeds.empty()) throw InvalidConfig("window sweep needs at least 1 seed");
  const int stride = cfg.stride > 0 ? cfg.stride : cfg.surrogate.segment_length;

  WindowSweepResult out;
  for (RobustnessGrid* grid : {&out.fig, &out.dig}) {
    grid->window_values = cfg.l2_values;
    grid->mean_grid = Matrix::Zero(static_cast<Eigen::Index>(nw), static_cast<Eigen::Index>(nw));
    grid->std_grid = Matrix::Zero(static_cast<Eigen::Index>(nw), static_cast<Eigen::Index>(nw));
  }

  const char* methods[] = {"fig", "dig"};
  std::map<std::string, std::vector<Matrix>> per_seed_grids;
  for (const char* method : methods) {
    const bool is_fig = std::string(method) == "fig";
    for (std::uint64_t seed : cfg.seeds) {
      StagedSurrogateConfig sim = cfg.surrogate;
      sim.seed = seed;
      const StagedSurrogate data = simulate_staged_surrogate(sim);

      // The L2 window only affects the covariance stage, so the feature and
      // histogram stages are computed once per seed.
      std::vector<DistanceMatrix> reps;
      std::vector<double> runtimes;
      if (is_fig) {
        const BasisSpec spec = fit_domain(data.series.values, cfg.fig.basis_count);
        FeatureMatrix F = compute_features(data.series, spec, cfg.fig.l1);
        F = stride_subsample(F, stride);
        const GramMatrix W = gram(spec);
        for (int l2 : cfg.l2_values) {
          FigConfig fc = cfg.fig;
          fc.l2 = WindowSpec{l2};
          const double start = now_seconds();
          const DistanceMatrix dist = fig_distance_matrix_from_features(F, W, fc);
          const Embedding emb = embed(dist, cfg.embed);
          runtimes.push_back(now_seconds() - start);
          reps.push_back(euclidean_distance_matrix(emb.Y));
        }
      } else {
        HistogramSet H = local_histograms(data.series, cfg.dig.l1, cfg.dig.bins);
        H = stride_subsample(H, stride);
        for (int l2 : cfg.l2_values) {
          const double start = now_seconds();
          const DistanceMatrix dist = dig_distance_matrix_from_histograms(H, WindowSpec{l2});
          const Embedding emb = embed(dist, cfg.embed);
          runtimes.push_back(now_seconds() - start);
          reps.push_back(euclidean_distance_matrix(emb.Y));
        }
      }

      Matrix grid = Matrix::Identity(static_cast<Eigen::Index>(nw), static_cast<Eigen::Index>(nw));
      for (std::size_t x = 0; x < nw; ++x)
        for (std::size_t y = x + 1; y < nw; ++y) {
          const double r = mantel(reps[x], reps[y]).r;
          grid(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = r;
          grid(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = r;
        }
      per_seed_grids[method].push_back(grid);

      for (std::size_t x = 0; x < nw; ++x) {
        SweepCell cell;
        cell.method = method;
        cell.sigma_or_window = cfg.l2_values[x];
        cell.seed = seed;
        double acc = 0.0;
        for (std::size_t y = 0; y < nw; ++y)
          if (y != x) acc += grid(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        cell.mantel_r = acc / static_cast<double>(nw - 1);
        cell.runtime_s = runtimes[x];
        out.cells.push_back(std::move(cell));
      }
    }
  }

  for (const char* method : methods) {
    RobustnessGrid& grid = std::string(method) == "fig" ? out.fig : out.dig;
    const std::vector<Matrix>& seeds_grids = per_seed_grids[method];
    const double ns = static_cast<double>(seeds_grids.size());
    for (const Matrix& g : seeds_grids) grid.mean_grid += g / ns;
    for (const Matrix& g : seeds_grids)
      grid.std_grid.array() += (g - grid.mean_grid).array().square() / std::max(ns - 1.0, 1.0);
    grid.std_grid = grid.std_grid.cwiseSqrt();

    std::vector<double> off_means;
    for (const Matrix& g : seeds_grids) {
      double acc = 0.0;
      for (std::size_t x = 0; x < nw; ++x)
        for (std::size_t y = 0; y < nw; ++y)
          if (x != y) acc += g(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      off_means.push_back(acc / static_cast<double>(nw * (nw - 1)));
    }
    grid.summary_mean = std::accumulate(off_means.begin(), off_means.end(), 0.0) / ns;
    double ss = 0.0;
    for (double v : off_means) ss += (v - grid.summary_mean) * (v - grid.summary_mean);
    grid.summary_std = off_means.size() > 1 ? std::sqrt(ss / (ns - 1.0)) : 0.0;
  }
  out.summary = summarize(out.cells);
  return out;
}

BenchmarkResult benchmark_distance_stage(const TimeSeries& X, const FigConfig& fig_cfg,
                                         const DigConfig& dig_cfg, int repetitions) {
  if (repetitions < 3) throw InvalidConfig("benchmark needs at least 3 repetitions");
  BenchmarkResult out;
  std::vector<double> fig_times, dig_times;
  for (int rep = 0; rep < repetitions; ++rep) {
    const double start = now_seconds();
    const DistanceMatrix d = fig_distance_matrix(X, fig_cfg);
    const double elapsed = now_seconds() - start;
    (void)d;
    fig_times.push_back(elapsed);
    out.rows.push_back({"fig", rep, elapsed});
  }
  for (int rep = 0; rep < repetitions; ++rep) {
    const double start = now_seconds();
    const DistanceMatrix d = dig_distance_matrix(X, dig_cfg);
    const double elapsed = now_seconds() - start;
    (void)d;
    dig_times.push_back(elapsed);
    out.rows.push_back({"dig", rep, elapsed});
  }
  out.fig_median = median_of(fig_times);
  out.dig_median = median_of(dig_times);
  return out;
}

}  // namespace fig
