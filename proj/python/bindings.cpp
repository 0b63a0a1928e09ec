#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fig/dig.hpp"
#include "fig/distance.hpp"
#include "fig/embed.hpp"
#include "fig/errors.hpp"
#include "fig/evaluate.hpp"
#include "fig/features.hpp"
#include "fig/simulate.hpp"

namespace py = pybind11;
using namespace fig;

namespace {

TimeSeries as_series(const Matrix& values) {
  TimeSeries X;
  X.values = values;
  return X;
}

DistanceMatrix as_distances(const Matrix& D) {
  if (D.rows() != D.cols()) throw InvalidData("distance matrix must be square");
  DistanceMatrix out;
  out.D = D;
  out.method = Method::Euclidean;
  return out;
}

FigConfig make_fig_config(int b, int l1, int l2, int stride, int k, const std::string& normalization) {
  FigConfig cfg;
  cfg.basis_count = b;
  cfg.l1.length = l1;
  cfg.l2.length = l2;
  cfg.stride = stride;
  cfg.K = k;
  cfg.normalization = score_normalization_from_string(normalization);
  return cfg;
}

EmbedConfig make_embed_config(int knn, double alpha, int t_override, int t_max, int r, double mds_tol,
                              int mds_max_iter) {
  EmbedConfig cfg;
  cfg.knn = knn;
  cfg.alpha = alpha;
  cfg.t_override = t_override;
  cfg.t_max = t_max;
  cfg.r = r;
  cfg.smacof_tol = mds_tol;
  cfg.smacof_max_iter = mds_max_iter;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "functional information geometry: noise-resilient time-series distances and embeddings";

  py::register_exception<Error>(m, "FigError");

  m.def(
      "simulate_sphere_walk",
      [](int n, double sigma_step, double sigma_noise, std::uint64_t seed) {
        const SphereWalk w = simulate_sphere_walk(n, sigma_step, sigma_noise, seed);
        return py::make_tuple(w.theta, w.Y, w.X);
      },
      py::arg("n") = 1000, py::arg("sigma_step") = 0.01, py::arg("sigma_noise") = 0.0,
      py::arg("seed") = 0,
      "Random walk on the unit sphere. Returns (theta, clean, noisy): hidden angles (n x 2),\n"
      "clean 3-D coordinates, and noisy observations.");

  m.def(
      "simulate_staged_surrogate",
      [](int n_segments, int segment_length, int d, std::uint64_t seed) {
        StagedSurrogateConfig cfg;
        cfg.n_segments = n_segments;
        cfg.segment_length = segment_length;
        cfg.d = d;
        cfg.seed = seed;
        const StagedSurrogate s = simulate_staged_surrogate(cfg);
        return py::make_tuple(s.series.values, s.series.labels, s.stage);
      },
      py::arg("n_segments") = 200, py::arg("segment_length") = 32, py::arg("d") = 6,
      py::arg("seed") = 0,
      "Segment-wise autoregressive surrogate with four hidden stages. Returns\n"
      "(values, labels, stage_index).");

  m.def(
      "fourier_features",
      [](const Matrix& X, int b, int l1, int stride) {
        BasisSpec spec = fit_domain(X, b);
        FeatureMatrix F = compute_features(as_series(X), spec, WindowSpec{l1});
        if (stride > 1) F = stride_subsample(F, stride);
        return F.rows;
      },
      py::arg("X"), py::arg("b") = 7, py::arg("l1") = 10, py::arg("stride") = 1,
      "Windowed Fourier basis averages, one feature row per kept sample.");

  m.def(
      "fig_distance_matrix",
      [](const Matrix& X, int b, int l1, int l2, int stride, int k, const std::string& normalization) {
        return fig_distance_matrix(as_series(X), make_fig_config(b, l1, l2, stride, k, normalization)).D;
      },
      py::arg("X"), py::arg("b") = 7, py::arg("l1") = 10, py::arg("l2") = 10, py::arg("stride") = 1,
      py::arg("k") = 0, py::arg("normalization") = "exp",
      "Two-sided functional-PCA score distances between all pairs of samples.");

  m.def(
      "dig_distance_matrix",
      [](const Matrix& X, int bins, int l1, int l2, int stride) {
        DigConfig cfg;
        cfg.bins = bins;
        cfg.l1.length = l1;
        cfg.l2.length = l2;
        cfg.stride = stride;
        return dig_distance_matrix(as_series(X), cfg).D;
      },
      py::arg("X"), py::arg("bins") = 20, py::arg("l1") = 10, py::arg("l2") = 10,
      py::arg("stride") = 1,
      "Histogram-based Mahalanobis distances (covariance-pooled pseudoinverse).");

  m.def(
      "euclidean_distance_matrix", [](const Matrix& X) { return euclidean_distance_matrix(X).D; },
      py::arg("X"), "Plain pairwise Euclidean distances between rows.");

  m.def(
      "embed",
      [](const Matrix& D, int knn, double alpha, int t_override, int t_max, int r, double mds_tol,
         int mds_max_iter) {
        const Embedding e =
            embed(as_distances(D), make_embed_config(knn, alpha, t_override, t_max, r, mds_tol, mds_max_iter));
        return py::make_tuple(e.Y, e.metadata, e.stress_history);
      },
      py::arg("D"), py::arg("knn") = 5, py::arg("alpha") = 40.0, py::arg("t_override") = 0,
      py::arg("t_max") = 100, py::arg("r") = 2, py::arg("mds_tol") = 1e-6,
      py::arg("mds_max_iter") = 500,
      "Diffusion potential embedding of a distance matrix. Returns (Y, metadata, stress_history).");

  m.def(
      "mantel",
      [](const Matrix& a, const Matrix& b, int n_perm, std::uint64_t seed) {
        const MantelResult res = mantel(as_distances(a), as_distances(b), n_perm, seed);
        return py::make_tuple(res.r, res.p_value);
      },
      py::arg("a"), py::arg("b"), py::arg("n_perm") = 0, py::arg("seed") = 0,
      "Mantel correlation between two distance matrices. Returns (r, p); p is NaN when\n"
      "n_perm == 0.");
}
