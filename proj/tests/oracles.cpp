#include "oracles.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phi(int m, double u) {  // 1-based index into the truncated family
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  if (m == 1) return 1.0;
  const int k = m / 2;
  const double angle = kTwoPi * k * u;
  return std::sqrt(2.0) * (m % 2 == 0 ? std::cos(angle) : std::sin(angle));
}

struct Range {
  int begin, end;
  int size() const { return end - begin; }
};

Range win(int i, int n, int L) {
  const int b = std::max(0, i - L / 2);
  const int e = std::min(n - 1, i + (L + 1) / 2 - 1) + 1;
  return {b, e};
}

std::vector<std::pair<double, double>> fit_bounds(const fig::Matrix& X) {
  std::vector<std::pair<double, double>> bounds;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double lo = X.col(c).minCoeff();
    const double hi = X.col(c).maxCoeff();
    if (hi - lo <= 0.0) {
      bounds.emplace_back(lo - 0.5, hi + 0.5);
    } else {
      const double pad = 1e-9 * (hi - lo + 1.0);
      bounds.emplace_back(lo - pad, hi + pad);
    }
  }
  return bounds;
}

// Mean and ridge-stabilized population covariance of rows [w.begin, w.end).
void window_moments(const fig::Matrix& rows, Range w, fig::Vector* mean, fig::Matrix* cov) {
  const auto M = rows.cols();
  mean->setZero(M);
  for (int t = w.begin; t < w.end; ++t) *mean += rows.row(t).transpose();
  *mean /= w.size();
  cov->setZero(M, M);
  for (int t = w.begin; t < w.end; ++t) {
    const fig::Vector d = rows.row(t).transpose() - *mean;
    *cov += d * d.transpose();
  }
  *cov /= w.size();
  const double ridge = 1e-10 * std::max(cov->trace(), 0.0) / static_cast<double>(M);
  cov->diagonal().array() += ridge;
}

}  // namespace

double fourier_inner(int a, int b, int intervals) {
  const double h = 1.0 / intervals;
  double sum = phi(a, 0.0) * phi(b, 0.0) + phi(a, 1.0) * phi(b, 1.0);
  for (int i = 1; i < intervals; ++i) {
    const double u = i * h;
    sum += (i % 2 == 1 ? 4.0 : 2.0) * phi(a, u) * phi(b, u);
  }
  return sum * h / 3.0;
}

fig::Matrix fourier_feature_rows(const fig::Matrix& X, int B, int l1,
                                 const std::vector<std::pair<double, double>>& bounds) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  fig::Matrix F = fig::Matrix::Zero(n, B * d);
  for (int i = 0; i < n; ++i) {
    const Range w = win(i, n, l1);
    for (int t = w.begin; t < w.end; ++t)
      for (int c = 0; c < d; ++c) {
        const auto [lo, hi] = bounds[static_cast<std::size_t>(c)];
        const double u = (X(t, c) - lo) / (hi - lo);
        for (int m = 1; m <= B; ++m) F(i, c * B + m - 1) += phi(m, u);
      }
    F.row(i) /= w.size();
  }
  return F;
}

fig::Matrix naive_fig_matrix(const fig::Matrix& X, int B, int l1, int l2, bool inv_sqrt) {
  const int n = static_cast<int>(X.rows());
  const fig::Matrix F = fourier_feature_rows(X, B, l1, fit_bounds(X));
  const auto M = F.cols();

  std::vector<fig::Matrix> U(static_cast<std::size_t>(n));
  std::vector<fig::Vector> weights(static_cast<std::size_t>(n));
  fig::Vector mean(M);
  fig::Matrix cov(M, M);
  for (int i = 0; i < n; ++i) {
    window_moments(F, win(i, n, l2), &mean, &cov);
    Eigen::JacobiSVD<fig::Matrix> svd(cov, Eigen::ComputeThinU);
    U[static_cast<std::size_t>(i)] = svd.matrixU();
    fig::Vector w = svd.singularValues();
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const double lam = w(k);
      if (inv_sqrt)
        w(k) = lam > 1e-12 ? 1.0 / std::sqrt(lam) : 0.0;
      else
        w(k) = std::exp(-lam);
    }
    weights[static_cast<std::size_t>(i)] = w;
  }

  fig::Matrix D = fig::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const fig::Vector z = (F.row(i) - F.row(j)).transpose();
      double q = 0.0;
      for (int side : {i, j}) {
        const fig::Vector proj = U[static_cast<std::size_t>(side)].transpose() * z;
        q += (proj.array() * weights[static_cast<std::size_t>(side)].array()).square().sum();
      }
      D(i, j) = D(j, i) = std::sqrt(q);
    }
  return D;
}

fig::Matrix naive_histograms(const fig::Matrix& X, int l1, int bins,
                             const std::vector<std::pair<double, double>>& bounds) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  fig::Matrix H = fig::Matrix::Zero(n, bins * d);
  for (int i = 0; i < n; ++i) {
    const Range w = win(i, n, l1);
    for (int t = w.begin; t < w.end; ++t)
      for (int c = 0; c < d; ++c) {
        const auto [lo, hi] = bounds[static_cast<std::size_t>(c)];
        int cell = static_cast<int>(std::floor((X(t, c) - lo) / (hi - lo) * bins));
        cell = std::clamp(cell, 0, bins - 1);
        H(i, c * bins + cell) += 1.0;
      }
    H.row(i) /= w.size();
  }
  return H;
}

double naive_dig_pair(int t, int s, const fig::HistogramSet& H, int l2) {
  const int n = static_cast<int>(H.rows.rows());
  const auto M = H.rows.cols();
  fig::Vector mu_t(M), mu_s(M);
  fig::Matrix C_t(M, M), C_s(M, M);
  window_moments(H.rows, win(t, n, l2), &mu_t, &C_t);
  window_moments(H.rows, win(s, n, l2), &mu_s, &C_s);

  const fig::Matrix A = C_t + C_s;
  const fig::Vector z = (H.rows.row(t) - H.rows.row(s)).transpose();
  Eigen::JacobiSVD<fig::Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const fig::Vector sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0.0;
  const double cutoff = 1e-10 * sigma(0);
  double q = 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > cutoff)
      q += svd.matrixU().col(k).dot(z) * svd.matrixV().col(k).dot(z) / sigma(k);
  return std::sqrt(std::max(q, 0.0));
}

int knee_scan(const fig::Vector& H) {
  const int m = static_cast<int>(H.size());
  if (m <= 1) return 1;
  const double dx = m - 1.0;
  const double dy = H(m - 1) - H(0);
  const double len = std::hypot(dx, dy);
  int best = 1;
  double best_dist = -1.0;
  for (int t = 1; t <= m; ++t) {
    const double dist = std::abs(dy * (t - 1.0) - dx * (H(t - 1) - H(0))) / len;
    if (dist > best_dist) {
      best_dist = dist;
      best = t;
    }
  }
  return best;
}

double naive_mantel(const fig::Matrix& a, const fig::Matrix& b) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> va, vb;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      va.push_back(a(i, j));
      vb.push_back(b(i, j));
    }
  const double m = static_cast<double>(va.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    ma += va[k];
    mb += vb[k];
  }
  ma /= m;
  mb /= m;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    saa += (va[k] - ma) * (va[k] - ma);
    sbb += (vb[k] - mb) * (vb[k] - mb);
    sab += (va[k] - ma) * (vb[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double procrustes_gap(const fig::Matrix& A, const fig::Matrix& B) {
  fig::Matrix Ac = A.rowwise() - A.colwise().mean();
  fig::Matrix Bc = B.rowwise() - B.colwise().mean();
  Eigen::JacobiSVD<fig::Matrix> svd(Ac.transpose() * Bc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const fig::Matrix Q = svd.matrixU() * svd.matrixV().transpose();
  const double denom = Ac.squaredNorm();
  const double scale = denom > 0.0 ? svd.singularValues().sum() / denom : 1.0;
  const double bnorm = Bc.norm();
  if (bnorm <= 0.0) return (scale * Ac * Q - Bc).norm();
  return (scale * Ac * Q - Bc).norm() / bnorm;
}

}  // namespace oracle
