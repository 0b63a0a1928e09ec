#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "fig/errors.hpp"

namespace fig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Ordered key=value pairs attached to every output artifact. std::map keeps
// serialization order deterministic.
using Metadata = std::map<std::string, std::string>;

// An ordered multivariate series: n rows of d-dimensional observations,
// optionally tagged with a per-sample label (hidden stage, parameter id).
struct TimeSeries {
  Matrix values;                    // n x d
  std::vector<std::string> labels;  // empty, or one entry per row

  Eigen::Index size() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }
};

enum class Method { Fig, Dig, Euclidean };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Fig: return "fig";
    case Method::Dig: return "dig";
    case Method::Euclidean: return "euclidean";
  }
  return "?";
}

inline Method method_from_string(const std::string& s) {
  if (s == "fig") return Method::Fig;
  if (s == "dig") return Method::Dig;
  if (s == "euclidean") return Method::Euclidean;
  throw InvalidConfig("unknown method '" + s + "' (expected fig|dig|euclidean)");
}

// Symmetric nonnegative pairwise distances with zero diagonal.
struct DistanceMatrix {
  Matrix D;
  Method method = Method::Euclidean;
  Metadata metadata;

  Eigen::Index size() const { return D.rows(); }
};

}  // namespace fig
