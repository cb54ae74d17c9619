#pragma once

// Community detection on the fused network: modularity with a resolution
// parameter, VOS quality as an alternative objective, and a Louvain-style
// optimizer (local moving + aggregation) shared by both.
//
// Modularity: Q = sum_c [ e_c/(2w) - gamma * (a_c/(2w))^2 ], where 2w is the
// total weight with each undirected pair counted twice, e_c twice the
// intra-community weight and a_c the summed weighted degrees of c;
// self-weights count in degrees.
//
// VOS quality: Q = (1/n^2) * sum over ordered intra-community pairs i != j of
// (a_ij - gamma), where a_ij = total * w_ij / (k_i * k_j) is the association
// strength of the pair (0 when a degree vanishes). Equivalently: association-
// strength-normalized weight minus gamma per intra-community pair.

#include "netfuse/core.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace netfuse {

struct ZeroTotalWeight : Error { using Error::Error; };

enum class Objective { modularity, vos };

struct QualityParams {
  Objective objective = Objective::modularity;
  double resolution = 1.0;   ///< gamma > 0
  std::uint64_t seed = 0;    ///< fixes the node visiting order shuffle
  int max_passes = 32;       ///< local-moving + aggregation rounds
};

namespace detail {

inline double total_weight_checked(const Matrix& W, const char* what) {
  const double total = W.sum();
  if (total <= 0.0) throw ZeroTotalWeight(detail::concat(what, ": total weight is not positive"));
  return total;
}

/// Association-strength matrix a_ij = total * w_ij / (k_i k_j), zero diagonal.
inline Matrix association_strength(const Matrix& W, double total) {
  const Index n = W.rows();
  const Eigen::VectorXd k = W.rowwise().sum();
  Matrix A = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double den = k(i) * k(j);
      if (den > 0.0) A(i, j) = total * W(i, j) / den;
    }
  return A;
}

}  // namespace detail

/// Modularity of a partition at resolution gamma.
inline double modularity(const SimilarityMatrix& W, const Partition& p, double resolution) {
  if (p.nodes() != W.nodes())
    throw DimensionMismatch("modularity: partition and matrix node sets differ");
  const Matrix& M = W.values();
  const double total = detail::total_weight_checked(M, "modularity");
  const Eigen::VectorXd k = M.rowwise().sum();
  const int nc = p.num_communities();
  std::vector<double> e(static_cast<std::size_t>(nc), 0.0);
  std::vector<double> a(static_cast<std::size_t>(nc), 0.0);
  const auto& membership = p.membership();
  for (Index i = 0; i < M.rows(); ++i) {
    const auto ci = static_cast<std::size_t>(membership[static_cast<std::size_t>(i)]);
    a[ci] += k(i);
    for (Index j = 0; j < M.cols(); ++j)
      if (membership[static_cast<std::size_t>(j)] == membership[static_cast<std::size_t>(i)])
        e[ci] += M(i, j);
  }
  double q = 0.0;
  for (int c = 0; c < nc; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    q += e[uc] / total - resolution * (a[uc] / total) * (a[uc] / total);
  }
  return q;
}

/// VOS quality of a partition at resolution gamma (formula in the header
/// comment). A single-node graph has no pairs and scores 0.
inline double vos_quality(const SimilarityMatrix& W, const Partition& p, double resolution) {
  if (p.nodes() != W.nodes())
    throw DimensionMismatch("vos_quality: partition and matrix node sets differ");
  const Matrix& M = W.values();
  const double total = detail::total_weight_checked(M, "vos_quality");
  const Matrix A = detail::association_strength(M, total);
  const Index n = M.rows();
  const auto& membership = p.membership();
  double q = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (membership[static_cast<std::size_t>(i)] != membership[static_cast<std::size_t>(j)])
        continue;
      q += A(i, j) - resolution;
    }
  return q / (static_cast<double>(n) * static_cast<double>(n));
}

namespace detail {

// Internal state for one aggregation level of the local-moving optimizer.
// Both objectives reduce to the same gain structure:
//   insert gain of node v into community c =
//     2 * edge_scale * K(v->c) - 2 * gamma * null_scale * f_v * F_c
// with K(v->c) the connection of v to c in `conn`, f the per-node null
// factor (weighted degree for modularity, subtree size for VOS) and F_c its
// sum over c. Aggregation sums both conn blocks and factors, so gains stay
// exact across levels; self-loops created by aggregation are retained.
struct GainModel {
  Matrix conn;
  std::vector<double> factor;
  double edge_scale = 0.0;
  double null_scale = 0.0;
};

inline GainModel make_modularity_model(const Matrix& W, double total) {
  GainModel model;
  model.conn = W;
  const Eigen::VectorXd k = W.rowwise().sum();
  model.factor.assign(static_cast<std::size_t>(W.rows()), 0.0);
  for (Index i = 0; i < W.rows(); ++i) model.factor[static_cast<std::size_t>(i)] = k(i);
  model.edge_scale = 1.0 / total;
  model.null_scale = 1.0 / (total * total);
  return model;
}

inline GainModel make_vos_model(const Matrix& W, double total) {
  GainModel model;
  model.conn = association_strength(W, total);
  model.factor.assign(static_cast<std::size_t>(W.rows()), 1.0);
  const double n2 = static_cast<double>(W.rows()) * static_cast<double>(W.rows());
  model.edge_scale = 1.0 / n2;
  model.null_scale = 1.0 / n2;
  return model;
}

// Accept a move only on a strict improvement; guards against cycling on
// floating-point ties.
constexpr double kMinGain = 1e-12;

/// One local-moving phase. Sweeps nodes in `order` until a full sweep makes
/// no move. Returns true if any node changed community.
inline bool local_moving_phase(const GainModel& model, double gamma,
                               const std::vector<std::size_t>& order,
                               std::vector<int>& membership) {
  const Index n = model.conn.rows();
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> community_factor(un, 0.0);
  for (std::size_t v = 0; v < un; ++v)
    community_factor[static_cast<std::size_t>(membership[v])] += model.factor[v];

  std::vector<double> conn_to(un, 0.0);       // community id -> K(v->c)
  std::vector<int> touched;                   // communities seen this sweep step
  touched.reserve(un);

  bool any_move = false;
  bool moved_in_sweep = true;
  while (moved_in_sweep) {
    moved_in_sweep = false;
    for (const std::size_t v : order) {
      const int old_c = membership[v];

      touched.clear();
      conn_to[static_cast<std::size_t>(old_c)] = 0.0;
      touched.push_back(old_c);
      for (Index u = 0; u < n; ++u) {
        if (static_cast<std::size_t>(u) == v) continue;
        const double w = model.conn(static_cast<Index>(v), u);
        if (w == 0.0) continue;
        const int cu = membership[static_cast<std::size_t>(u)];
        if (conn_to[static_cast<std::size_t>(cu)] == 0.0 &&
            std::find(touched.begin(), touched.end(), cu) == touched.end())
          touched.push_back(cu);
        conn_to[static_cast<std::size_t>(cu)] += w;
      }

      // Detach v, then evaluate insert gains. A candidate must strictly beat
      // reinsertion into the old community; equal-gain candidates resolve to
      // the lowest community id.
      community_factor[static_cast<std::size_t>(old_c)] -= model.factor[v];
      const auto insert_gain = [&](int c) {
        return 2.0 * model.edge_scale * conn_to[static_cast<std::size_t>(c)] -
               2.0 * gamma * model.null_scale * model.factor[v] *
                   community_factor[static_cast<std::size_t>(c)];
      };
      const double old_gain = insert_gain(old_c);
      int best_c = old_c;
      double best_gain = old_gain;
      for (const int c : touched) {
        if (c == old_c) continue;
        const double gain = insert_gain(c);
        if (gain - old_gain <= kMinGain) continue;
        if (gain > best_gain + kMinGain ||
            (gain > best_gain - kMinGain && best_c != old_c && c < best_c)) {
          best_gain = gain;
          best_c = c;
        }
      }

      community_factor[static_cast<std::size_t>(best_c)] += model.factor[v];
      if (best_c != old_c) {
        membership[v] = best_c;
        moved_in_sweep = true;
        any_move = true;
      }
      for (const int c : touched) conn_to[static_cast<std::size_t>(c)] = 0.0;
    }
  }
  return any_move;
}

/// Collapse communities into supernodes: conn blocks and factors are summed;
/// intra-community weight becomes a retained self-loop.
inline GainModel aggregate(const GainModel& model, const std::vector<int>& membership,
                           int num_communities) {
  GainModel agg;
  agg.edge_scale = model.edge_scale;
  agg.null_scale = model.null_scale;
  agg.conn = Matrix::Zero(num_communities, num_communities);
  agg.factor.assign(static_cast<std::size_t>(num_communities), 0.0);
  const Index n = model.conn.rows();
  for (Index i = 0; i < n; ++i) {
    const int ci = membership[static_cast<std::size_t>(i)];
    agg.factor[static_cast<std::size_t>(ci)] += model.factor[static_cast<std::size_t>(i)];
    for (Index j = 0; j < n; ++j)
      agg.conn(ci, membership[static_cast<std::size_t>(j)]) += model.conn(i, j);
  }
  return agg;
}

}  // namespace detail

/// Louvain-style optimization of the configured objective. The local-moving
/// phase repeatedly moves single nodes to the neighboring community with the
/// largest strictly positive gain (ties: lowest community id); the community
/// graph is then aggregated and the process repeats until a pass improves
/// nothing or max_passes is reached. Deterministic given params.seed, which
/// drives the visiting-order shuffle. The result never scores below the
/// singleton partition.
inline Partition louvain(const SimilarityMatrix& W, const QualityParams& params) {
  if (params.resolution <= 0.0)
    throw Error(detail::concat("louvain: resolution ", params.resolution, " must be positive"));
  if (params.max_passes < 1)
    throw Error(detail::concat("louvain: max_passes ", params.max_passes, " must be >= 1"));
  const double total = detail::total_weight_checked(W.values(), "louvain");

  detail::GainModel model = params.objective == Objective::modularity
                                ? detail::make_modularity_model(W.values(), total)
                                : detail::make_vos_model(W.values(), total);

  const std::size_t n = W.size();
  std::vector<int> node_to_final(n);
  for (std::size_t i = 0; i < n; ++i) node_to_final[i] = static_cast<int>(i);

  std::mt19937_64 rng(params.seed);

  for (int pass = 0; pass < params.max_passes; ++pass) {
    const std::size_t level_n = static_cast<std::size_t>(model.conn.rows());
    std::vector<int> membership(level_n);
    for (std::size_t i = 0; i < level_n; ++i) membership[i] = static_cast<int>(i);

    std::vector<std::size_t> order(level_n);
    for (std::size_t i = 0; i < level_n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    const bool improved = detail::local_moving_phase(model, params.resolution, order, membership);
    if (!improved) break;

    membership = canonicalize_membership(membership);
    int num_communities = 1 + *std::max_element(membership.begin(), membership.end());
    for (std::size_t i = 0; i < n; ++i)
      node_to_final[i] = membership[static_cast<std::size_t>(node_to_final[i])];
    if (static_cast<std::size_t>(num_communities) == level_n) break;
    model = detail::aggregate(model, membership, num_communities);
  }

  return Partition(W.nodes(), canonicalize_membership(node_to_final));
}

/// Adjusted Rand index between two partitions of the same node set; 1 for
/// identical clusterings, ~0 for independent ones.
inline double adjusted_rand_index(const Partition& a, const Partition& b) {
  if (a.nodes().size() != b.nodes().size())
    throw DimensionMismatch("adjusted_rand_index: partitions size differ");
  const std::size_t n = a.nodes().size();
  const int ka = a.num_communities();
  const int kb = b.num_communities();
  std::vector<std::vector<long long>> table(static_cast<std::size_t>(ka),
                                            std::vector<long long>(static_cast<std::size_t>(kb), 0));
  for (std::size_t i = 0; i < n; ++i)
    ++table[static_cast<std::size_t>(a.community(i))][static_cast<std::size_t>(b.community(i))];

  auto choose2 = [](long long x) { return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0; };
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  std::vector<long long> row_tot(static_cast<std::size_t>(ka), 0);
  std::vector<long long> col_tot(static_cast<std::size_t>(kb), 0);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) {
      const long long nij = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      index += choose2(nij);
      row_tot[static_cast<std::size_t>(i)] += nij;
      col_tot[static_cast<std::size_t>(j)] += nij;
    }
  for (long long r : row_tot) sum_a += choose2(r);
  for (long long c : col_tot) sum_b += choose2(c);
  const double expected = sum_a * sum_b / choose2(static_cast<long long>(n));
  const double maximum = (sum_a + sum_b) / 2.0;
  if (maximum == expected) return index == expected ? 1.0 : 0.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace netfuse
