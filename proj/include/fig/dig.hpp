#pragma once

#include <utility>
#include <vector>

#include "fig/features.hpp"
#include "fig/types.hpp"

namespace fig {

// Windowed per-dimension probability histograms: row i concatenates, for
// each input dimension, an equal-width histogram (bins cells over the
// globally fitted range) of the samples in the window at i. Each block of a
// row sums to 1.
struct HistogramSet {
  Matrix rows;  // n x (bins * d)
  int bins = 20;
  std::vector<std::pair<double, double>> bounds;  // per-dimension range
};

struct DigConfig {
  int bins = 20;      // N_b per dimension
  WindowSpec l1{10};  // histogram window over samples
  WindowSpec l2{10};  // covariance window over histogram rows
  int stride = 1;
};

HistogramSet local_histograms(const TimeSeries& X, WindowSpec l1, int bins);
HistogramSet stride_subsample(const HistogramSet& H, int stride);

// Per-index covariance summaries of the histogram rows (same windowing,
// population normalizer, and trace-scaled ridge as the feature covariance).
struct DigModels {
  WindowSpec l2;
  Matrix means;               // n x (bins*d)
  std::vector<double> ridge;  // per index
};

DigModels build_dig_models(const HistogramSet& H, WindowSpec l2);

// Dense covariance of index t (reference path; the matrix assembly never
// materializes these at scale).
Matrix dig_local_covariance(const HistogramSet& H, const DigModels& C, int t);

// Histogram Mahalanobis distance of one pair through the Moore-Penrose
// pseudo-inverse of (C_t + C_s); singular values <= 1e-10 * sigma_max are
// dropped.
double dig_pair_distance(int t, int s, const HistogramSet& H, const DigModels& C);

DistanceMatrix dig_distance_matrix_from_histograms(const HistogramSet& H, WindowSpec l2);
DistanceMatrix dig_distance_matrix(const TimeSeries& X, const DigConfig& cfg);

}  // namespace fig
