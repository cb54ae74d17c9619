#pragma once

// Similarity Network Fusion. Each layer's similarity matrix is normalized
// into an initial status matrix and reduced to a local kNN kernel; the Cross
// Diffusion Process then iterates
//
//   P^(l) <- Q^(l) * (mean of the other layers' status matrices) * Q^(l)^T
//
// and the fused network is the mean of the final status matrices. Strong
// links present in single layers and weak links common to all layers are
// both reinforced.

#include "netfuse/core.hpp"
#include "netfuse/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace netfuse {

struct AllZeroMatrix : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };

enum class NormalizationVariant {
  global_mass,    ///< p_ij = s_ij / sum_{g,h} s_gh (whole-matrix mass 1)
  row_stochastic  ///< p_ij = s_ij / (2 sum_{h != i} s_ih), p_ii = 1/2, then symmetrized
};

struct FusionParams {
  int k = 5;                  ///< neighborhood size, must satisfy k < n
  int iterations = 10;        ///< diffusion iteration count T
  NormalizationVariant normalization = NormalizationVariant::global_mass;
  bool symmetrize_each_step = true;
  /// Early stop when the max per-layer Frobenius delta between consecutive
  /// iterations falls below this; unset means always run all T iterations.
  /// With m = 2 the alternating update can settle into a two-cycle whose
  /// delta plateaus above zero, so very small tolerances may never trigger.
  std::optional<double> convergence_tolerance;
};

/// Per-iteration record: statuses[t][l] is layer l's status matrix after t
/// iterations (statuses[0] holds the initial statuses); deltas[t-1] is the
/// max per-layer Frobenius distance between iterations t-1 and t.
struct FusionTrace {
  std::vector<std::vector<Matrix>> statuses;
  std::vector<double> deltas;
};

/// Global normalization: divide by the total mass so all entries sum to 1.
inline Matrix global_normalize(const SimilarityMatrix& S) {
  const double total = S.values().sum();
  if (total <= 0.0)
    throw AllZeroMatrix("global_normalize: similarity matrix has no positive entry");
  return S.values() / total;
}

/// Row-stochastic variant: off-diagonal row mass 1/2, diagonal 1/2, then
/// symmetrized. An isolated node keeps all mass on its diagonal.
inline Matrix row_stochastic_normalize(const SimilarityMatrix& S) {
  const Index n = S.values().rows();
  Matrix P = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Index j = 0; j < n; ++j)
      if (j != i) off += S.values()(i, j);
    if (off > 0.0) {
      for (Index j = 0; j < n; ++j)
        if (j != i) P(i, j) = S.values()(i, j) / (2.0 * off);
      P(i, i) = 0.5;
    } else {
      P(i, i) = 1.0;
    }
  }
  Matrix sym = (P + P.transpose()) / 2.0;
  return sym;
}

/// Local kNN kernel (the "local" similarity matrix). For each node i the k
/// most similar other nodes form N_i (ties broken by ascending node index);
/// q_ij = s_ij / sum_{h in N_i} s_ih inside N_i, 0 outside. Rows whose
/// neighborhood mass is zero stay all-zero. Q is generally not symmetric.
inline Matrix knn_local_kernel(const SimilarityMatrix& S, int k) {
  const Index n = S.values().rows();
  if (k < 1 || static_cast<Index>(k) >= n)
    throw KTooLarge(detail::concat("knn_local_kernel: k = ", k,
                                   " must be in [1, n-1] with n = ", n));
  Matrix Q = Matrix::Zero(n, n);
  std::vector<Index> candidates(static_cast<std::size_t>(n) - 1);
  for (Index i = 0; i < n; ++i) {
    candidates.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) candidates.push_back(j);
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(),
                      [&](Index a, Index b) {
                        const double sa = S.values()(i, a), sb = S.values()(i, b);
                        if (sa != sb) return sa > sb;
                        return a < b;
                      });
    double mass = 0.0;
    for (int h = 0; h < k; ++h) mass += S.values()(i, candidates[static_cast<std::size_t>(h)]);
    if (mass <= 0.0) continue;  // isolated node: zero row
    for (int h = 0; h < k; ++h) {
      const Index j = candidates[static_cast<std::size_t>(h)];
      Q(i, j) = S.values()(i, j) / mass;
    }
  }
  return Q;
}

/// One CDP iteration over all layers:
/// P'^(l) = Q^(l) * ((1/(m-1)) sum_{h != l} P^(h)) * Q^(l)^T,
/// optionally re-symmetrized. All layers update from the same previous
/// statuses, so per-layer products are schedule-independent.
inline std::vector<Matrix> cdp_step(const std::vector<Matrix>& local,
                                    const std::vector<Matrix>& status,
                                    bool symmetrize = true) {
  const std::size_t m = status.size();
  if (m < 2) throw DimensionMismatch("cdp_step: needs >= 2 layers");
  if (local.size() != m)
    throw DimensionMismatch(detail::concat("cdp_step: ", local.size(), " kernels for ", m,
                                           " status matrices"));
  const Index n = status[0].rows();
  for (std::size_t l = 0; l < m; ++l) {
    if (status[l].rows() != n || status[l].cols() != n || local[l].rows() != n ||
        local[l].cols() != n)
      throw DimensionMismatch(detail::concat("cdp_step: matrix for layer ", l,
                                             " is not ", n, "x", n));
  }

  std::vector<Matrix> next(m);
  detail::parallel_for(m, [&](std::size_t l) {
    Matrix avg = Matrix::Zero(n, n);
    for (std::size_t h = 0; h < m; ++h)
      if (h != l) avg += status[h];
    avg /= static_cast<double>(m - 1);
    Matrix updated = local[l] * avg * local[l].transpose();
    if (symmetrize) updated = (updated + updated.transpose()) / 2.0;
    next[l] = std::move(updated);
  });
  return next;
}

struct FusionResult {
  SimilarityMatrix fused;
  std::optional<FusionTrace> trace;
};

/// Run the full fusion: normalize every layer into its initial status, build
/// the kNN kernels once from the raw similarities, iterate cdp_step T times
/// (or until the optional convergence tolerance is met), and return the mean
/// of the final statuses, symmetrized, over the shared node set.
inline FusionResult fuse(const MultilayerNetwork& net, const FusionParams& params,
                         bool keep_trace = false) {
  const std::size_t m = net.num_layers();
  const Index n = static_cast<Index>(net.nodes().size());
  if (params.iterations < 1)
    throw Error(detail::concat("fuse: iterations = ", params.iterations, " must be >= 1"));
  if (params.k < 1 || static_cast<Index>(params.k) >= n)
    throw KTooLarge(detail::concat("fuse: k = ", params.k, " must be in [1, n-1] with n = ", n));

  std::vector<Matrix> status(m);
  std::vector<Matrix> local(m);
  for (std::size_t l = 0; l < m; ++l) {
    status[l] = params.normalization == NormalizationVariant::global_mass
                    ? global_normalize(net.layer(l))
                    : row_stochastic_normalize(net.layer(l));
    local[l] = knn_local_kernel(net.layer(l), params.k);
  }

  FusionTrace trace;
  if (keep_trace) trace.statuses.push_back(status);

  for (int t = 0; t < params.iterations; ++t) {
    std::vector<Matrix> next = cdp_step(local, status, params.symmetrize_each_step);
    double delta = 0.0;
    for (std::size_t l = 0; l < m; ++l)
      delta = std::max(delta, (next[l] - status[l]).norm());
    status = std::move(next);
    if (keep_trace) {
      trace.statuses.push_back(status);
      trace.deltas.push_back(delta);
    }
    if (params.convergence_tolerance && delta < *params.convergence_tolerance) break;
  }

  Matrix fused = Matrix::Zero(n, n);
  for (const auto& P : status) fused += P;
  fused /= static_cast<double>(m);
  fused = (fused + fused.transpose()) / 2.0;

  FusionResult result{SimilarityMatrix(net.nodes(), std::move(fused)), std::nullopt};
  if (keep_trace) result.trace = std::move(trace);
  return result;
}

}  // namespace netfuse
