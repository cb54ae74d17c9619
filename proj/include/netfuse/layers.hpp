#pragma once

// Construction of per-layer similarity matrices from raw relational data:
// set Jaccard from incidence sets, generalized (weighted) Jaccard from
// count vectors, direct edge-list loads, and cross-layer alignment.

#include "netfuse/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace netfuse {

struct NegativeWeight : Error { using Error::Error; };
struct EmptyIntersection : Error { using Error::Error; };
struct StrictMismatch : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Input representations

/// Per-node entity sets (e.g. journal -> set of author ids). Entities are
/// compared by exact string equality; empty sets are allowed.
class IncidenceData {
 public:
  IncidenceData(NodeSet nodes, std::vector<std::set<std::string>> entity_sets)
      : nodes_(std::move(nodes)), sets_(std::move(entity_sets)) {
    if (sets_.size() != nodes_.size())
      throw DimensionMismatch(detail::concat("IncidenceData: ", sets_.size(),
                                             " entity sets for ", nodes_.size(), " nodes"));
  }

  const NodeSet& nodes() const noexcept { return nodes_; }
  const std::vector<std::set<std::string>>& entity_sets() const noexcept { return sets_; }
  const std::set<std::string>& entities(std::size_t node) const { return sets_.at(node); }

 private:
  NodeSet nodes_;
  std::vector<std::set<std::string>> sets_;
};

/// Per-node nonnegative weight vectors over a common entity universe;
/// supports count-valued layers (e.g. co-citation counts) where raw sets
/// are unavailable.
class WeightedIncidence {
 public:
  WeightedIncidence(NodeSet nodes, std::vector<std::map<std::string, double>> weights)
      : nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (weights_.size() != nodes_.size())
      throw DimensionMismatch(detail::concat("WeightedIncidence: ", weights_.size(),
                                             " weight vectors for ", nodes_.size(), " nodes"));
    for (std::size_t i = 0; i < weights_.size(); ++i)
      for (const auto& [entity, w] : weights_[i]) {
        if (!std::isfinite(w))
          throw NonFiniteEntry(detail::concat("WeightedIncidence: non-finite weight for node '",
                                              nodes_.label(i), "', entity '", entity, "'"));
        if (w < 0.0)
          throw NegativeWeight(detail::concat("WeightedIncidence: weight ", w, " for node '",
                                              nodes_.label(i), "', entity '", entity, "'"));
      }
  }

  const NodeSet& nodes() const noexcept { return nodes_; }
  const std::vector<std::map<std::string, double>>& weights() const noexcept { return weights_; }

 private:
  NodeSet nodes_;
  std::vector<std::map<std::string, double>> weights_;
};

/// Labeled weighted edges over a NodeSet. Duplicate (i,j) pairs sum at
/// conversion time; self-loops are rejected unless explicitly allowed.
class WeightedEdgeList {
 public:
  struct Edge {
    std::string source;
    std::string target;
    double weight;
  };

  WeightedEdgeList(NodeSet nodes, std::vector<Edge> edges, bool allow_self_loops = false)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), allow_self_loops_(allow_self_loops) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& edge = edges_[e];
      nodes_.index_of(edge.source);
      nodes_.index_of(edge.target);
      if (!std::isfinite(edge.weight))
        throw NonFiniteEntry(detail::concat("WeightedEdgeList: non-finite weight on edge ", e));
      if (edge.weight < 0.0)
        throw NegativeWeight(detail::concat("WeightedEdgeList: weight ", edge.weight,
                                            " on edge ('", edge.source, "','", edge.target, "')"));
      if (!allow_self_loops_ && edge.source == edge.target)
        throw Error(detail::concat("WeightedEdgeList: self-loop on '", edge.source,
                                   "' (not flagged as allowed)"));
    }
  }

  const NodeSet& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool allow_self_loops() const noexcept { return allow_self_loops_; }

 private:
  NodeSet nodes_;
  std::vector<Edge> edges_;
  bool allow_self_loops_;
};

// ---------------------------------------------------------------------------
// Layer builders

/// Set Jaccard layer: values[i][j] = |A_i n A_j| / |A_i u A_j|.
/// Pairs where both sets are empty get 0 (avoids 0/0); the diagonal is 1 for
/// non-empty sets and 0 for empty ones.
inline SimilarityMatrix jaccard_from_incidence(const IncidenceData& data) {
  const std::size_t n = data.nodes().size();
  Matrix values = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  const auto& sets = data.entity_sets();
  for (std::size_t i = 0; i < n; ++i) {
    values(static_cast<Index>(i), static_cast<Index>(i)) = sets[i].empty() ? 0.0 : 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t inter = 0;
      auto ai = sets[i].begin();
      auto bj = sets[j].begin();
      while (ai != sets[i].end() && bj != sets[j].end()) {
        if (*ai < *bj) ++ai;
        else if (*bj < *ai) ++bj;
        else { ++inter; ++ai; ++bj; }
      }
      const std::size_t uni = sets[i].size() + sets[j].size() - inter;
      const double v = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
      values(static_cast<Index>(i), static_cast<Index>(j)) = v;
      values(static_cast<Index>(j), static_cast<Index>(i)) = v;
    }
  }
  return SimilarityMatrix(data.nodes(), std::move(values));
}

/// Generalized Jaccard over weight vectors:
/// values[i][j] = sum_e min(w_i[e], w_j[e]) / sum_e max(w_i[e], w_j[e]),
/// 0 when the denominator is 0. Reduces to set Jaccard on 0/1 weights.
inline SimilarityMatrix generalized_jaccard_from_weights(const WeightedIncidence& data) {
  const std::size_t n = data.nodes().size();
  Matrix values = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  const auto& vecs = data.weights();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double num = 0.0, den = 0.0;
      auto ai = vecs[i].begin();
      auto bj = vecs[j].begin();
      while (ai != vecs[i].end() || bj != vecs[j].end()) {
        if (bj == vecs[j].end() || (ai != vecs[i].end() && ai->first < bj->first)) {
          den += ai->second;  // entity only in i: min 0, max w_i
          ++ai;
        } else if (ai == vecs[i].end() || bj->first < ai->first) {
          den += bj->second;
          ++bj;
        } else {
          num += std::min(ai->second, bj->second);
          den += std::max(ai->second, bj->second);
          ++ai;
          ++bj;
        }
      }
      const double v = den == 0.0 ? 0.0 : num / den;
      values(static_cast<Index>(i), static_cast<Index>(j)) = v;
      values(static_cast<Index>(j), static_cast<Index>(i)) = v;
    }
  }
  return SimilarityMatrix(data.nodes(), std::move(values));
}

enum class EdgeListNormalization {
  none,          ///< raw summed weights
  max,           ///< divide by the largest off-diagonal weight
  jaccard_pairs  ///< w_ij / (w_ii + w_jj - w_ij), diagonal entries as set sizes
};

/// Dense symmetric layer from a weighted edge list. Duplicate (i,j) pairs are
/// summed; entries (i,j) and (j,i) are summed into one undirected weight.
/// With `jaccard_pairs` the diagonal self-weights act as set cardinalities,
/// so the edge list must carry self-loops (allow_self_loops = true).
inline SimilarityMatrix similarity_from_edge_list(
    const WeightedEdgeList& edges,
    EdgeListNormalization normalization = EdgeListNormalization::none) {
  const std::size_t n = edges.nodes().size();
  Matrix acc = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (const auto& e : edges.edges()) {
    const auto i = static_cast<Index>(edges.nodes().index_of(e.source));
    const auto j = static_cast<Index>(edges.nodes().index_of(e.target));
    acc(i, j) += e.weight;
  }
  Matrix values = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (Index i = 0; i < values.rows(); ++i) {
    values(i, i) = acc(i, i);
    for (Index j = i + 1; j < values.cols(); ++j) {
      const double w = acc(i, j) + acc(j, i);
      values(i, j) = w;
      values(j, i) = w;
    }
  }

  switch (normalization) {
    case EdgeListNormalization::none:
      break;
    case EdgeListNormalization::max: {
      double max_off = 0.0;
      for (Index i = 0; i < values.rows(); ++i)
        for (Index j = i + 1; j < values.cols(); ++j)
          max_off = std::max(max_off, values(i, j));
      if (max_off > 0.0) values /= max_off;
      break;
    }
    case EdgeListNormalization::jaccard_pairs: {
      Matrix jac = Matrix::Zero(values.rows(), values.cols());
      for (Index i = 0; i < values.rows(); ++i) {
        jac(i, i) = values(i, i) > 0.0 ? 1.0 : 0.0;
        for (Index j = i + 1; j < values.cols(); ++j) {
          const double den = values(i, i) + values(j, j) - values(i, j);
          const double v = den <= 0.0 ? 0.0 : values(i, j) / den;
          jac(i, j) = v;
          jac(j, i) = v;
        }
      }
      values = std::move(jac);
      break;
    }
  }
  return SimilarityMatrix(edges.nodes(), std::move(values));
}

// ---------------------------------------------------------------------------
// Alignment

enum class AlignPolicy {
  strict,    ///< all layers must share an identical NodeSet (labels and order)
  intersect  ///< restrict every layer to the common label set
};

struct AlignResult {
  MultilayerNetwork network;
  /// Labels dropped from each input layer (empty lists under strict).
  std::vector<std::vector<std::string>> dropped;
};

/// Assemble layers into a multiplex. Under `intersect`, the retained labels
/// keep the order they have in the first layer and every retained similarity
/// value equals the corresponding input value.
inline AlignResult align_layers(const std::vector<SimilarityMatrix>& layers,
                                const std::vector<std::string>& names,
                                AlignPolicy policy = AlignPolicy::strict) {
  if (layers.size() < 2)
    throw Error(detail::concat("align_layers: needs >= 2 layers, got ", layers.size()));
  if (names.size() != layers.size())
    throw DimensionMismatch("align_layers: layer/name count mismatch");

  if (policy == AlignPolicy::strict) {
    for (std::size_t l = 1; l < layers.size(); ++l)
      if (layers[l].nodes() != layers[0].nodes())
        throw StrictMismatch(detail::concat("align_layers: layer '", names[l],
                                            "' node set differs from layer '", names[0], "'"));
    return AlignResult{MultilayerNetwork(layers, names),
                       std::vector<std::vector<std::string>>(layers.size())};
  }

  // Common labels, ordered as in the first layer.
  std::vector<std::string> common;
  for (const auto& label : layers[0].nodes().labels()) {
    bool everywhere = true;
    for (std::size_t l = 1; l < layers.size() && everywhere; ++l)
      everywhere = layers[l].nodes().contains(label);
    if (everywhere) common.push_back(label);
  }
  if (common.empty()) throw EmptyIntersection("align_layers: no label common to all layers");

  NodeSet nodes(common);
  std::vector<SimilarityMatrix> restricted;
  std::vector<std::vector<std::string>> dropped(layers.size());
  restricted.reserve(layers.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    for (const auto& label : layer.nodes().labels())
      if (!nodes.contains(label)) dropped[l].push_back(label);
    Matrix values(static_cast<Index>(common.size()), static_cast<Index>(common.size()));
    for (std::size_t i = 0; i < common.size(); ++i) {
      const auto oi = static_cast<Index>(layer.nodes().index_of(common[i]));
      for (std::size_t j = 0; j < common.size(); ++j) {
        const auto oj = static_cast<Index>(layer.nodes().index_of(common[j]));
        values(static_cast<Index>(i), static_cast<Index>(j)) = layer.values()(oi, oj);
      }
    }
    restricted.emplace_back(nodes, std::move(values));
  }
  return AlignResult{MultilayerNetwork(std::move(restricted), names), std::move(dropped)};
}

}  // namespace netfuse
