#pragma once

// Shared helpers for the test suites.

#include "netfuse/core.hpp"

#include <string>
#include <vector>

namespace helpers {

inline netfuse::NodeSet numbered(netfuse::Index n) {
  std::vector<std::string> labels;
  for (netfuse::Index i = 0; i < n; ++i) labels.push_back("n" + std::to_string(i + 1));
  return netfuse::NodeSet(labels);
}

inline netfuse::SimilarityMatrix wrap(const netfuse::Matrix& m) {
  return netfuse::SimilarityMatrix(numbered(m.rows()), m);
}

inline netfuse::DistanceMatrix wrap_distance(const netfuse::Matrix& d) {
  return netfuse::DistanceMatrix(numbered(d.rows()), d);
}

/// Exact elementwise equality (no tolerance).
inline bool bit_equal(const netfuse::Matrix& a, const netfuse::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (netfuse::Index i = 0; i < a.rows(); ++i)
    for (netfuse::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace helpers
