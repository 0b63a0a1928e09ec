#include "fig/dig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fig/basis.hpp"
#include "fig/errors.hpp"
#include "fig/threading.hpp"

namespace fig {

namespace {

// Same conventions as the feature covariance: trace-scaled ridge and a
// relative rank cutoff for the pseudo-inverse.
constexpr double kRidgeScale = 1e-10;
constexpr double kPinvCutoff = 1e-10;

void validate_histograms(const HistogramSet& H) {
  if (H.rows.rows() < 1) throw InvalidData("histogram set is empty");
  if (H.bins < 2) throw InvalidConfig("histogram bin count must be at least 2");
  if (H.rows.cols() != static_cast<Eigen::Index>(H.bins) * static_cast<Eigen::Index>(H.bounds.size()))
    throw InvalidData("histogram set has inconsistent dimensions");
}

}  // namespace

HistogramSet local_histograms(const TimeSeries& X, WindowSpec l1, int bins) {
  if (bins < 2) throw InvalidConfig("histogram bin count must be at least 2");
  if (l1.length < 1) throw InvalidConfig("window length must be at least 1");
  const Matrix& V = X.values;
  const std::int64_t n = V.rows();
  const int d = static_cast<int>(V.cols());
  if (n < 1 || d < 1) throw InvalidData("time series is empty");
  if (!V.allFinite()) throw InvalidData("time series contains non-finite values");

  HistogramSet H;
  H.bins = bins;
  H.bounds = fit_domain(V, 1).domain_bounds;
  H.rows = Matrix::Zero(n, static_cast<Eigen::Index>(bins) * d);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const IndexRange r = window_indices(static_cast<int>(i), static_cast<int>(n), l1.length);
      for (int j = 0; j < d; ++j) {
        const double lo = H.bounds[j].first;
        const double inv_width = bins / (H.bounds[j].second - lo);
        for (int a = r.begin; a < r.end; ++a) {
          int cell = static_cast<int>(std::floor((V(a, j) - lo) * inv_width));
          cell = std::clamp(cell, 0, bins - 1);
          H.rows(i, static_cast<Eigen::Index>(j) * bins + cell) += 1.0;
        }
      }
      H.rows.row(i) /= static_cast<double>(r.size());
    }
  });
  return H;
}

HistogramSet stride_subsample(const HistogramSet& H, int stride) {
  validate_histograms(H);
  const std::vector<int> keep = stride_indices(static_cast<int>(H.rows.rows()), stride);
  HistogramSet out;
  out.bins = H.bins;
  out.bounds = H.bounds;
  out.rows.resize(static_cast<Eigen::Index>(keep.size()), H.rows.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) out.rows.row(static_cast<Eigen::Index>(k)) = H.rows.row(keep[k]);
  return out;
}

DigModels build_dig_models(const HistogramSet& H, WindowSpec l2) {
  validate_histograms(H);
  if (l2.length < 1) throw InvalidConfig("window length must be at least 1");
  const std::int64_t n = H.rows.rows();
  const std::int64_t m = H.rows.cols();
  DigModels C;
  C.l2 = l2;
  C.means.resize(n, m);
  C.ridge.resize(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const IndexRange r = window_indices(static_cast<int>(i), static_cast<int>(n), l2.length);
      const auto block = H.rows.middleRows(r.begin, r.size());
      C.means.row(i) = block.colwise().mean();
      const double trace =
          block.rowwise().squaredNorm().sum() / r.size() - C.means.row(i).squaredNorm();
      C.ridge[static_cast<std::size_t>(i)] = kRidgeScale * std::max(trace, 0.0) / static_cast<double>(m);
    }
  });
  return C;
}

Matrix dig_local_covariance(const HistogramSet& H, const DigModels& C, int t) {
  validate_histograms(H);
  const int n = static_cast<int>(H.rows.rows());
  if (t < 0 || t >= n) throw InvalidData("covariance index out of range");
  if (C.means.rows() != n) throw InvalidData("covariance models do not match the histogram set");
  const IndexRange r = window_indices(t, n, C.l2.length);
  const auto block = H.rows.middleRows(r.begin, r.size());
  Matrix cov = block.transpose() * block / static_cast<double>(r.size());
  cov.noalias() -= C.means.row(t).transpose() * C.means.row(t);
  cov = 0.5 * (cov + cov.transpose()).eval();
  cov.diagonal().array() += C.ridge[static_cast<std::size_t>(t)];
  return cov;
}

double dig_pair_distance(int t, int s, const HistogramSet& H, const DigModels& C) {
  const int n = static_cast<int>(H.rows.rows());
  if (t < 0 || t >= n || s < 0 || s >= n) throw InvalidData("pair index out of range");
  if (t == s) return 0.0;
  const Matrix cov = dig_local_covariance(H, C, t) + dig_local_covariance(H, C, s);
  const Vector diff = (H.rows.row(t) - H.rows.row(s)).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  const Vector& lam = es.eigenvalues();  // ascending; equals the singular values (PSD)
  const double lam_max = std::max(lam(lam.size() - 1), 0.0);
  const double cutoff = kPinvCutoff * lam_max;
  const Vector proj = es.eigenvectors().transpose() * diff;
  double q = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (lam(k) > cutoff) q += proj(k) * proj(k) / lam(k);
  return std::sqrt(std::max(q, 0.0));
}

namespace {

// All-pairs assembly when the covariance windows are narrow: C_t + C_s minus
// its ridge is Z^T Z for the stacked, centered, 1/sqrt(w)-scaled window rows
// Z (at most w_t + w_s of them), so each pair needs only the eigensystem of
// the small Gram matrix Z Z^T. Its entries are gathered from three n x n
// inner-product tables computed once. A ridge-shifted direction is dropped by
// the rank cutoff exactly as in the dense path: the shifted spectrum is
// {lambda_k + delta} plus delta itself on the complement, and delta is always
// below the cutoff because delta = 1e-10 * trace(Z^T Z) / M <= cutoff / (1 + 1e-10).
void dig_pairs_gram(const HistogramSet& H, const DigModels& C, const std::vector<IndexRange>& win,
                    Matrix* D) {
  const std::int64_t n = H.rows.rows();
  const Matrix HH = H.rows * H.rows.transpose();    // h_a . h_b
  const Matrix HM = H.rows * C.means.transpose();   // h_a . mu_b
  const Matrix MM = C.means * C.means.transpose();  // mu_a . mu_b

  int wmax = 0;
  for (const IndexRange& r : win) wmax = std::max(wmax, r.size());

  // Diagonal Gram blocks Z_t Z_t^T, shared by every pair containing t.
  std::vector<Matrix> tt(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      const IndexRange& r = win[static_cast<std::size_t>(t)];
      const int w = r.size();
      Matrix& block = tt[static_cast<std::size_t>(t)];
      block.resize(w, w);
      for (int b = 0; b < w; ++b)
        for (int a = 0; a < w; ++a)
          block(a, b) = (HH(r.begin + a, r.begin + b) - HM(r.begin + a, t) -
                         HM(r.begin + b, t) + MM(t, t)) /
                        w;
    }
  });

  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    Matrix G(2 * wmax, 2 * wmax);
    Vector z(2 * wmax), p(2 * wmax);
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    for (std::int64_t i = begin; i < end; ++i) {
      const IndexRange& ri = win[static_cast<std::size_t>(i)];
      const int wi = ri.size();
      const double rwi = std::sqrt(static_cast<double>(wi));
      for (std::int64_t j = i + 1; j < n; ++j) {
        const IndexRange& rj = win[static_cast<std::size_t>(j)];
        const int wj = rj.size();
        const double rwj = std::sqrt(static_cast<double>(wj));
        const int m = wi + wj;
        auto Gm = G.topLeftCorner(m, m);
        Gm.topLeftCorner(wi, wi) = tt[static_cast<std::size_t>(i)];
        Gm.bottomRightCorner(wj, wj) = tt[static_cast<std::size_t>(j)];
        const double cross = 1.0 / (rwi * rwj);
        for (int a = 0; a < wi; ++a)  // lower-triangle cross block, solver reads lower
          for (int b = 0; b < wj; ++b)
            Gm(wi + b, a) = (HH(ri.begin + a, rj.begin + b) - HM(ri.begin + a, j) -
                             HM(rj.begin + b, i) + MM(i, j)) *
                            cross;
        for (int a = 0; a < wi; ++a)
          z(a) = (HH(ri.begin + a, i) - HH(ri.begin + a, j) - HM(i, i) + HM(j, i)) / rwi;
        for (int b = 0; b < wj; ++b)
          z(wi + b) = (HH(rj.begin + b, i) - HH(rj.begin + b, j) - HM(i, j) + HM(j, j)) / rwj;
        es.compute(Gm);
        const Vector& lam = es.eigenvalues();
        const double delta = C.ridge[static_cast<std::size_t>(i)] + C.ridge[static_cast<std::size_t>(j)];
        const double cutoff = kPinvCutoff * (std::max(lam(m - 1), 0.0) + delta);
        p.head(m).noalias() = es.eigenvectors().transpose() * z.head(m);
        double q = 0.0;
        for (int k = 0; k < m; ++k)
          if (lam(k) > 0.0 && lam(k) + delta > cutoff)
            q += p(k) * p(k) / (lam(k) * (lam(k) + delta));
        (*D)(i, j) = std::sqrt(std::max(q, 0.0));
      }
    }
  });
}

// Wide-window assembly: diagonalize each summed covariance directly, reusing
// per-index dense covariances when they fit in memory.
void dig_pairs_dense(const HistogramSet& H, const DigModels& C, Matrix* D) {
  const std::int64_t n = H.rows.rows();
  const std::int64_t m = H.rows.cols();
  const bool cache = static_cast<double>(n) * m * m * 8.0 <= 2e9;
  std::vector<Matrix> covs;
  if (cache) {
    covs.resize(static_cast<std::size_t>(n));
    parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t i = begin; i < end; ++i)
        covs[static_cast<std::size_t>(i)] = dig_local_covariance(H, C, static_cast<int>(i));
    });
  }
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    Matrix sum(m, m);
    Vector diff(m), p(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    for (std::int64_t i = begin; i < end; ++i) {
      const Matrix cov_i = cache ? Matrix() : dig_local_covariance(H, C, static_cast<int>(i));
      for (std::int64_t j = i + 1; j < n; ++j) {
        if (cache)
          sum = covs[static_cast<std::size_t>(i)] + covs[static_cast<std::size_t>(j)];
        else
          sum = cov_i + dig_local_covariance(H, C, static_cast<int>(j));
        diff = (H.rows.row(i) - H.rows.row(j)).transpose();
        es.compute(sum);
        const Vector& lam = es.eigenvalues();
        const double cutoff = kPinvCutoff * std::max(lam(m - 1), 0.0);
        p.noalias() = es.eigenvectors().transpose() * diff;
        double q = 0.0;
        for (Eigen::Index k = 0; k < m; ++k)
          if (lam(k) > cutoff) q += p(k) * p(k) / lam(k);
        (*D)(i, j) = std::sqrt(std::max(q, 0.0));
      }
    }
  });
}

}  // namespace

DistanceMatrix dig_distance_matrix_from_histograms(const HistogramSet& H, WindowSpec l2) {
  validate_histograms(H);
  const std::int64_t n = H.rows.rows();
  if (n < 2) throw InvalidData("need at least 2 observations for a distance matrix");
  const DigModels C = build_dig_models(H, l2);

  std::vector<IndexRange> win(static_cast<std::size_t>(n));
  int wmax = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    win[static_cast<std::size_t>(i)] = window_indices(static_cast<int>(i), static_cast<int>(n), l2.length);
    wmax = std::max(wmax, win[static_cast<std::size_t>(i)].size());
  }

  DistanceMatrix out;
  out.method = Method::Dig;
  out.D = Matrix::Zero(n, n);
  if (2 * wmax < H.rows.cols())
    dig_pairs_gram(H, C, win, &out.D);
  else
    dig_pairs_dense(H, C, &out.D);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      for (std::int64_t j = i + 1; j < n; ++j) out.D(j, i) = out.D(i, j);
  });
  return out;
}

DistanceMatrix dig_distance_matrix(const TimeSeries& X, const DigConfig& cfg) {
  if (X.size() < 2) throw InvalidData("dig_distance_matrix: need at least 2 samples");
  if (cfg.stride < 1) throw InvalidConfig("stride must be at least 1");
  HistogramSet H = local_histograms(X, cfg.l1, cfg.bins);
  if (cfg.stride > 1) H = stride_subsample(H, cfg.stride);
  return dig_distance_matrix_from_histograms(H, cfg.l2);
}

}  // namespace fig
