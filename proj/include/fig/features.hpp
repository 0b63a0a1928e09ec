#pragma once

#include <vector>

#include "fig/basis.hpp"
#include "fig/types.hpp"

namespace fig {

// Center-aligned time window, clamped to the valid index range at the
// series boundaries (edge windows shrink, rows stay aligned with samples).
struct WindowSpec {
  int length = 10;  // L
};

// Half-open index range [begin, end).
struct IndexRange {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};

// Window centered at i: [max(0, i - L/2), min(n-1, i + ceil(L/2) - 1)].
IndexRange window_indices(int i, int n, int L);

// Rows of windowed basis-function averages: row i is the mean of the basis
// evaluated over the samples in the window at i.
struct FeatureMatrix {
  Matrix rows;  // n x M
  BasisSpec spec;
  WindowSpec window;
};

FeatureMatrix compute_features(const TimeSeries& X, const BasisSpec& spec, WindowSpec l1);

// Same averaging with caller-supplied neighbor sets instead of time windows.
FeatureMatrix compute_features(const TimeSeries& X, const BasisSpec& spec,
                               const std::vector<std::vector<int>>& neighbors);

// Keeps rows 0, stride, 2*stride, ... (segment-center subsampling).
FeatureMatrix stride_subsample(const FeatureMatrix& F, int stride);

// Row indices retained by stride subsampling of an n-row matrix.
std::vector<int> stride_indices(int n, int stride);

}  // namespace fig
