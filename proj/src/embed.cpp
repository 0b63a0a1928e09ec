#include "fig/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fig/errors.hpp"
#include "fig/threading.hpp"

namespace fig {

namespace {

constexpr double kLogFloor = 1e-7;  // added to P^t before the elementwise log

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void fix_sign(Eigen::Ref<Vector> v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-12) {
      if (v(k) < 0) v = -v;
      return;
    }
  }
}

void check_square(const Matrix& D, const char* what) {
  if (D.rows() != D.cols() || D.rows() < 2) throw InvalidData(std::string(what) + ": need a square matrix of at least 2 points");
}

}  // namespace

AffinityGraph alpha_decay_kernel(const DistanceMatrix& D, int k, double alpha) {
  check_square(D.D, "alpha_decay_kernel");
  const std::int64_t n = D.D.rows();
  if (k < 1 || k >= n) throw InvalidConfig("neighbor count must be in [1, n-1]");
  if (!(alpha > 0)) throw InvalidConfig("decay exponent must be positive");
  if (D.D.maxCoeff() <= 0.0) throw IdenticalPoints("all pairwise distances are zero");

  Matrix K(n, n);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> row(static_cast<std::size_t>(n) - 1);
    for (std::int64_t i = begin; i < end; ++i) {
      std::size_t m = 0;
      for (std::int64_t j = 0; j < n; ++j)
        if (j != i) row[m++] = D.D(i, j);
      std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
      double eps = row[static_cast<std::size_t>(k) - 1];
      if (eps <= 0.0) {
        // Degenerate bandwidth: fall back to the nearest positive distance.
        eps = 0.0;
        for (double v : row)
          if (v > 0.0 && (eps == 0.0 || v < eps)) eps = v;
        if (eps == 0.0) eps = 1.0;
      }
      for (std::int64_t j = 0; j < n; ++j) K(i, j) = std::exp(-std::pow(D.D(i, j) / eps, alpha));
    }
  });

  AffinityGraph out;
  out.knn = k;
  out.alpha = alpha;
  out.Kmat = 0.5 * (K + K.transpose());
  return out;
}

DiffusionOperator row_normalize(const AffinityGraph& K) {
  check_square(K.Kmat, "row_normalize");
  const std::int64_t n = K.Kmat.rows();
  DiffusionOperator op;
  op.degree = K.Kmat.rowwise().sum();
  for (std::int64_t i = 0; i < n; ++i)
    if (!(op.degree(i) > 0.0)) throw DisconnectedPoint(static_cast<int>(i));
  op.P = op.degree.cwiseInverse().asDiagonal() * K.Kmat;
  return op;
}

Vector diffusion_entropy_curve(const DiffusionOperator& P, int t_max) {
  check_square(P.P, "diffusion_entropy_curve");
  if (t_max < 2) throw InvalidConfig("t_max must be at least 2");
  const std::int64_t n = P.P.rows();

  // Conjugate the operator into symmetric form; same eigenvalues as P.
  Matrix A;
  if (P.degree.size() == n && (P.degree.array() > 0).all()) {
    const Vector s = P.degree.array().sqrt();
    A = s.asDiagonal() * P.P * s.cwiseInverse().asDiagonal();
  } else {
    A = P.P;
  }
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  const Eigen::ArrayXd mags = es.eigenvalues().array().abs();

  Vector H(t_max);
  Eigen::ArrayXd powers = mags;
  for (int t = 1; t <= t_max; ++t) {
    const double total = powers.sum();
    double h = 0.0;
    if (total > 0.0) {
      for (std::int64_t k = 0; k < n; ++k) {
        const double p = powers(k) / total;
        if (p > 0.0) h -= p * std::log(p);
      }
    }
    H(t - 1) = h;
    powers *= mags;
  }
  return H;
}

int entropy_knee(const Vector& H) {
  const Eigen::Index m = H.size();
  if (m < 1) throw InvalidData("entropy curve is empty");
  if (m == 1) return 1;
  const double dx = static_cast<double>(m - 1);
  const double dy = H(m - 1) - H(0);
  const double norm = std::hypot(dx, dy);
  int best_t = 1;
  double best = -1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double dist = std::abs(dy * static_cast<double>(i) - dx * (H(i) - H(0))) / norm;
    if (dist > best) {
      best = dist;
      best_t = static_cast<int>(i) + 1;
    }
  }
  return best_t;
}

int select_diffusion_time(const DiffusionOperator& P, int t_max) {
  return entropy_knee(diffusion_entropy_curve(P, t_max));
}

Matrix matrix_power(const Matrix& P, int t) {
  if (t < 1) throw InvalidConfig("diffusion time must be at least 1");
  if (P.rows() != P.cols()) throw InvalidData("matrix_power: need a square matrix");
  Matrix result = P;
  Matrix base = P;
  int e = t - 1;
  while (e > 0) {
    if (e & 1) result = (result * base).eval();
    e >>= 1;
    if (e > 0) base = (base * base).eval();
  }
  return result;
}

DistanceMatrix potential_distances(const DiffusionOperator& P, int t) {
  check_square(P.P, "potential_distances");
  const std::int64_t n = P.P.rows();
  const Matrix Pt = matrix_power(P.P, t);
  const Matrix U = (-(Pt.array() + kLogFloor).log()).matrix();

  DistanceMatrix out;
  out.method = Method::Euclidean;
  out.metadata["source"] = "diffusion-potential";
  out.metadata["t"] = std::to_string(t);
  out.D = Matrix::Zero(n, n);
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      for (std::int64_t j = i + 1; j < n; ++j) out.D(i, j) = (U.row(i) - U.row(j)).norm();
  });
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i)
      for (std::int64_t j = i + 1; j < n; ++j) out.D(j, i) = out.D(i, j);
  });
  return out;
}

Matrix classical_mds(const DistanceMatrix& D, int r) {
  check_square(D.D, "classical_mds");
  const std::int64_t n = D.D.rows();
  if (r < 1) throw InvalidConfig("embedding dimension must be positive");
  if (r >= n) throw InvalidConfig("embedding dimension must be below the point count");

  Matrix B = -0.5 * D.D.cwiseProduct(D.D);
  const Vector row_mean = B.rowwise().mean();
  const Vector col_mean = B.colwise().mean().transpose();
  const double total_mean = B.mean();
  B.colwise() -= row_mean;
  B.rowwise() -= col_mean.transpose();
  B.array() += total_mean;
  B = 0.5 * (B + B.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(B);
  Matrix Y(n, r);
  for (int c = 0; c < r; ++c) {
    const Eigen::Index k = n - 1 - c;  // eigenvalues ascending; take the top r
    const double lam = std::max(es.eigenvalues()(k), 0.0);
    Vector v = es.eigenvectors().col(k);
    fix_sign(v);
    Y.col(c) = v * std::sqrt(lam);
  }
  return Y;
}

namespace {

void pairwise_rows(const Matrix& Y, Matrix* out) {
  const std::int64_t n = Y.rows();
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      (*out)(i, i) = 0.0;
      for (std::int64_t j = 0; j < n; ++j)
        if (j != i) (*out)(i, j) = (Y.row(i) - Y.row(j)).norm();
    }
  });
}

double stress_of(const Matrix& target, const Matrix& actual) {
  double s = 0.0;
  const std::int64_t n = target.rows();
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double diff = target(i, j) - actual(i, j);
      s += diff * diff;
    }
  return s;
}

}  // namespace

Embedding smacof_mds(const DistanceMatrix& D, int r, const Matrix& init, int max_iter, double tol) {
  check_square(D.D, "smacof_mds");
  const std::int64_t n = D.D.rows();
  if (init.rows() != n || init.cols() != r) throw InvalidConfig("smacof init shape does not match (n, r)");
  if (max_iter < 0) throw InvalidConfig("max_iter must be nonnegative");
  if (!(tol >= 0)) throw InvalidConfig("tol must be nonnegative");

  Embedding emb;
  emb.r = r;
  emb.Y = init;
  Matrix EY(n, n), B(n, n);
  pairwise_rows(emb.Y, &EY);
  double prev = stress_of(D.D, EY);
  emb.stress_history.push_back(prev);

  for (int it = 0; it < max_iter && prev > 0.0; ++it) {
    parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t i = begin; i < end; ++i) {
        double diag = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double b = EY(i, j) > 0.0 ? D.D(i, j) / EY(i, j) : 0.0;
          B(i, j) = b;
          diag += b;
        }
        B(i, i) = -diag;
      }
    });
    emb.Y = (B * emb.Y).eval() / static_cast<double>(n);
    pairwise_rows(emb.Y, &EY);
    const double cur = stress_of(D.D, EY);
    emb.stress_history.push_back(cur);
    if ((prev - cur) / prev < tol) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  emb.metadata["embed.smacof_tol"] = format_double(tol);
  emb.metadata["embed.smacof_max_iter"] = std::to_string(max_iter);
  emb.metadata["embed.smacof_iterations"] = std::to_string(emb.stress_history.size() - 1);
  emb.metadata["embed.stress_final"] = format_double(prev);
  return emb;
}

Embedding embed(const DistanceMatrix& D, const EmbedConfig& cfg) {
  check_square(D.D, "embed");
  const std::int64_t n = D.D.rows();
  if (n < std::max(cfg.knn + 1, cfg.r + 1)) throw InvalidData("embed: too few points for the requested knn and dimension");

  const AffinityGraph graph = alpha_decay_kernel(D, cfg.knn, cfg.alpha);
  DiffusionOperator op = row_normalize(graph);
  op.t = cfg.t_override > 0 ? cfg.t_override : select_diffusion_time(op, cfg.t_max);
  const DistanceMatrix pot = potential_distances(op, op.t);
  const Matrix init = classical_mds(pot, cfg.r);
  Embedding emb = smacof_mds(pot, cfg.r, init, cfg.smacof_max_iter, cfg.smacof_tol);

  emb.metadata["embed.knn"] = std::to_string(cfg.knn);
  emb.metadata["embed.alpha"] = format_double(cfg.alpha);
  emb.metadata["embed.t_override"] = std::to_string(cfg.t_override);
  emb.metadata["embed.t_max"] = std::to_string(cfg.t_max);
  emb.metadata["embed.t_selected"] = std::to_string(op.t);
  emb.metadata["embed.r"] = std::to_string(cfg.r);
  emb.metadata["embed.eps_log"] = format_double(kLogFloor);
  emb.metadata["distance.method"] = to_string(D.method);
  return emb;
}

}  // namespace fig
