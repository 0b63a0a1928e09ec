#include "fig/features.hpp"

#include "fig/threading.hpp"

namespace fig {

IndexRange window_indices(int i, int n, int L) {
  const int lo = std::max(0, i - L / 2);
  const int hi = std::min(n - 1, i + (L + 1) / 2 - 1);
  return {lo, hi + 1};
}

namespace {

FeatureMatrix average_basis(const TimeSeries& X, const BasisSpec& spec, WindowSpec window,
                            const std::function<IndexRange(int)>& range_of) {
  if (X.size() == 0) throw InvalidData("compute_features: empty series");
  spec.validate();
  const int n = static_cast<int>(X.size());
  const int M = spec.feature_count();

  // Basis of every sample, then window means; phi rows are reused by all
  // windows covering them. Row-major so each sample's basis values are
  // contiguous for the raw-pointer evaluation.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi(n, M);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      eval_basis(X.values.row(i), spec, phi.row(i).data());
  });

  FeatureMatrix F;
  F.spec = spec;
  F.window = window;
  F.rows.resize(n, M);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const IndexRange r = range_of(static_cast<int>(i));
      if (r.size() <= 0) throw InvalidData("compute_features: empty neighbor set");
      F.rows.row(i) =
          phi.middleRows(r.begin, r.size()).colwise().sum() / static_cast<double>(r.size());
    }
  });
  return F;
}

}  // namespace

FeatureMatrix compute_features(const TimeSeries& X, const BasisSpec& spec, WindowSpec l1) {
  const int n = static_cast<int>(X.size());
  return average_basis(X, spec, l1,
                       [&](int i) { return window_indices(i, n, l1.length); });
}

FeatureMatrix compute_features(const TimeSeries& X, const BasisSpec& spec,
                               const std::vector<std::vector<int>>& neighbors) {
  if (neighbors.size() != static_cast<std::size_t>(X.size()))
    throw InvalidData("compute_features: one neighbor set per sample required");
  // Neighbor sets must be contiguous index ranges for the windowed-average
  // formulation; arbitrary sets are averaged per element instead.
  if (X.size() == 0) throw InvalidData("compute_features: empty series");
  spec.validate();
  const int n = static_cast<int>(X.size());
  const int M = spec.feature_count();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi(n, M);
  for (int i = 0; i < n; ++i) eval_basis(X.values.row(i), spec, phi.row(i).data());

  FeatureMatrix F;
  F.spec = spec;
  F.window = WindowSpec{0};
  F.rows = Matrix::Zero(n, M);
  for (int i = 0; i < n; ++i) {
    if (neighbors[i].empty()) throw InvalidData("compute_features: empty neighbor set");
    for (int j : neighbors[i]) {
      if (j < 0 || j >= n) throw InvalidData("compute_features: neighbor index out of range");
      F.rows.row(i) += phi.row(j);
    }
    F.rows.row(i) /= static_cast<double>(neighbors[i].size());
  }
  return F;
}

std::vector<int> stride_indices(int n, int stride) {
  if (stride < 1) throw InvalidConfig("stride must be >= 1");
  std::vector<int> keep;
  for (int i = 0; i < n; i += stride) keep.push_back(i);
  return keep;
}

FeatureMatrix stride_subsample(const FeatureMatrix& F, int stride) {
  const auto keep = stride_indices(static_cast<int>(F.rows.rows()), stride);
  FeatureMatrix out;
  out.spec = F.spec;
  out.window = F.window;
  out.rows.resize(keep.size(), F.rows.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) out.rows.row(k) = F.rows.row(keep[k]);
  return out;
}

}  // namespace fig
