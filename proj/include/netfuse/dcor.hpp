#pragma once

// Generalized distance correlation R_d between the fused network and the
// individual layers, and partial distance correlation R_d* with a third
// layer's effect projected out. Similarity matrices enter as distance
// structures via a row-embedding; R_d uses the biased (V-statistic)
// double-centered estimator, R_d* the unbiased u-centered one.

#include "netfuse/core.hpp"
#include "netfuse/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace netfuse {

struct TooFewNodes : Error { using Error::Error; };

enum class DistanceEmbedding {
  similarity_rows,  ///< d_ij = Euclidean norm of (row_i - row_j) of the similarity matrix
  one_minus         ///< d_ij = max(0, 1 - s_ij) off-diagonal; sensitivity-check variant
};

/// Embed a similarity matrix as a distance structure. The default treats each
/// node's similarity row as its feature vector and takes Euclidean distances
/// between rows, which is metric and uses all matrix information.
inline DistanceMatrix rows_to_distance(const SimilarityMatrix& S,
                                       DistanceEmbedding embedding = DistanceEmbedding::similarity_rows) {
  const Index n = S.values().rows();
  Matrix D = Matrix::Zero(n, n);
  if (embedding == DistanceEmbedding::similarity_rows) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double d = (S.values().row(i) - S.values().row(j)).norm();
        D(i, j) = d;
        D(j, i) = d;
      }
  } else {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double d = std::max(0.0, 1.0 - S.values()(i, j));
        D(i, j) = d;
        D(j, i) = d;
      }
  }
  return DistanceMatrix(S.nodes(), std::move(D));
}

enum class Centering { double_centered, u_centered };

struct CenteredMatrix {
  Matrix values;
  Centering centering;
};

/// Double centering: A_ij = d_ij - rowmean_i - colmean_j + grandmean.
/// Every row and column of the result sums to zero.
inline CenteredMatrix double_center(const DistanceMatrix& D) {
  const Index n = D.values().rows();
  if (n < 2) throw TooFewNodes("double_center: needs n >= 2");
  const Eigen::VectorXd row_means = D.values().rowwise().mean();
  const Eigen::VectorXd col_means = D.values().colwise().mean();
  const double grand = D.values().mean();
  Matrix A(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      A(i, j) = D.values()(i, j) - row_means(i) - col_means(j) + grand;
  return CenteredMatrix{std::move(A), Centering::double_centered};
}

/// U-centering (Szekely-Rizzo): for i != j,
/// A_ij = d_ij - rowsum_i/(n-2) - colsum_j/(n-2) + total/((n-1)(n-2)),
/// diagonal 0. Off-diagonal row and column sums vanish. Requires n >= 4 for
/// the associated inner product to be defined.
inline CenteredMatrix u_center(const DistanceMatrix& D) {
  const Index n = D.values().rows();
  if (n < 4) throw TooFewNodes(detail::concat("u_center: needs n >= 4, got ", n));
  const Eigen::VectorXd row_sums = D.values().rowwise().sum();
  const Eigen::VectorXd col_sums = D.values().colwise().sum();
  const double total = D.values().sum();
  const double nm2 = static_cast<double>(n - 2);
  Matrix A = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      A(i, j) = D.values()(i, j) - row_sums(i) / nm2 - col_sums(j) / nm2 +
                total / (nm2 * static_cast<double>(n - 1));
    }
  return CenteredMatrix{std::move(A), Centering::u_centered};
}

/// Inner product on the space of u-centered matrices:
/// (A . B) = sum_{i != j} A_ij B_ij / (n(n-3)).
inline double u_inner(const CenteredMatrix& A, const CenteredMatrix& B) {
  const Index n = A.values.rows();
  if (B.values.rows() != n)
    throw DimensionMismatch("u_inner: operand sizes differ");
  const double s = (A.values.array() * B.values.array()).sum();
  return s / (static_cast<double>(n) * static_cast<double>(n - 3));
}

/// Generalized distance correlation R_d in [0,1] (biased V-statistic):
/// R_d = dCov^2 / sqrt(dVar^2(X) dVar^2(Y)) over the double-centered
/// matrices, with dCov^2 the mean of entrywise products. A degenerate
/// (zero-variance) input yields 0 with a warning rather than an error, so
/// report generation survives a constant layer. R_d = 1 indicates perfect
/// association; the reporting layer emits sqrt(R_d).
inline double distance_correlation(const DistanceMatrix& Dx, const DistanceMatrix& Dy) {
  if (Dx.size() != Dy.size())
    throw DimensionMismatch(detail::concat("distance_correlation: sizes ", Dx.size(), " vs ",
                                           Dy.size()));
  const Matrix A = double_center(Dx).values;
  const Matrix B = double_center(Dy).values;
  const double dcov2 = (A.array() * B.array()).mean();
  const double dvar_x = (A.array() * A.array()).mean();
  const double dvar_y = (B.array() * B.array()).mean();
  if (dvar_x <= 0.0 || dvar_y <= 0.0) {
    std::cerr << "netfuse: warning: degenerate distance variance, R_d set to 0\n";
    return 0.0;
  }
  const double r = dcov2 / std::sqrt(dvar_x * dvar_y);
  return std::clamp(r, 0.0, 1.0);
}

/// Partial distance correlation R_d* (signed): u-center all three distance
/// structures, project the first two onto the orthogonal complement of the
/// third, and return the cosine of the residuals. Projecting out a zero
/// u-centered matrix is the identity; a zero-norm residual yields 0.
inline double partial_distance_correlation(const DistanceMatrix& Dx, const DistanceMatrix& Dy,
                                           const DistanceMatrix& Dz) {
  if (Dx.size() != Dy.size() || Dx.size() != Dz.size())
    throw DimensionMismatch("partial_distance_correlation: sizes differ");
  const CenteredMatrix A = u_center(Dx);
  const CenteredMatrix B = u_center(Dy);
  const CenteredMatrix C = u_center(Dz);

  const double cc = u_inner(C, C);
  Matrix PA = A.values;
  Matrix PB = B.values;
  if (cc > 0.0) {
    PA -= (u_inner(A, C) / cc) * C.values;
    PB -= (u_inner(B, C) / cc) * C.values;
  }
  const CenteredMatrix RA{std::move(PA), Centering::u_centered};
  const CenteredMatrix RB{std::move(PB), Centering::u_centered};
  const double na = u_inner(RA, RA);
  const double nb = u_inner(RB, RB);
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return u_inner(RA, RB) / std::sqrt(na * nb);
}

// ---------------------------------------------------------------------------
// Report

/// Correlation table: one sqrt(R_d) per layer
/// against the fused network, and sqrt(R_d*) for every (target | conditioning)
/// layer pair. Raw signed R_d* values are kept alongside; the display value
/// is sqrt(R_d*) when nonnegative and 0 otherwise.
struct CorrelationReport {
  std::vector<std::string> layer_names;
  std::vector<double> sqrt_rd;  ///< sqrt(R_d(F, layer_l))
  /// sqrt_rd_star[l][c]: target layer l conditioned on layer c; diagonal unused (NaN).
  std::vector<std::vector<double>> sqrt_rd_star;
  /// Signed raw R_d* values, same indexing.
  std::vector<std::vector<double>> rd_star_raw;
};

/// Build the full correlation report between a fused network and the layers
/// it was fused from. (l, c) pairs are independent and may run in parallel.
inline CorrelationReport correlation_report(
    const SimilarityMatrix& fused, const MultilayerNetwork& net,
    DistanceEmbedding embedding = DistanceEmbedding::similarity_rows) {
  if (fused.nodes() != net.nodes())
    throw DimensionMismatch("correlation_report: fused matrix and layers share no node set");
  const std::size_t m = net.num_layers();
  const DistanceMatrix Df = rows_to_distance(fused, embedding);
  std::vector<DistanceMatrix> Dl;
  Dl.reserve(m);
  for (std::size_t l = 0; l < m; ++l) Dl.push_back(rows_to_distance(net.layer(l), embedding));

  CorrelationReport report;
  report.layer_names = net.layer_names();
  report.sqrt_rd.assign(m, 0.0);
  report.sqrt_rd_star.assign(m, std::vector<double>(m, std::numeric_limits<double>::quiet_NaN()));
  report.rd_star_raw.assign(m, std::vector<double>(m, std::numeric_limits<double>::quiet_NaN()));

  detail::parallel_for(m, [&](std::size_t l) {
    report.sqrt_rd[l] = std::sqrt(distance_correlation(Df, Dl[l]));
  });

  // Ordered (target l, conditioning c) pairs, l != c.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t c = 0; c < m; ++c)
      if (l != c) pairs.emplace_back(l, c);
  detail::parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [l, c] = pairs[p];
    const double raw = partial_distance_correlation(Df, Dl[l], Dl[c]);
    report.rd_star_raw[l][c] = raw;
    report.sqrt_rd_star[l][c] = raw >= 0.0 ? std::min(1.0, std::sqrt(raw)) : 0.0;
  });
  return report;
}

}  // namespace netfuse
