#pragma once

#include <stdexcept>
#include <string>

namespace fig {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or non-finite input data (bad CSV, NaN sample, empty series).
class InvalidData : public Error {
 public:
  using Error::Error;
};

// Inconsistent or out-of-range configuration (K > M, r >= n, ...).
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Mantel correlation requested on a distance matrix with zero variance.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

// Every pairwise distance is zero; no affinity graph can be formed.
class IdenticalPoints : public Error {
 public:
  using Error::Error;
};

// A kernel row sums to zero; the point is disconnected from the graph.
class DisconnectedPoint : public Error {
 public:
  explicit DisconnectedPoint(int index)
      : Error("point " + std::to_string(index) + " is disconnected (zero kernel row)"),
        index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

}  // namespace fig
