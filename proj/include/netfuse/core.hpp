#pragma once

// Core domain types shared by every stage of the fusion pipeline: a labeled
// node set, dense symmetric similarity/distance matrices over it, the
// multiplex wrapper, and community partitions. All types validate their
// invariants on construction and are immutable afterwards.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netfuse {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Errors

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NonSquare : Error { using Error::Error; };
struct NegativeEntry : Error { using Error::Error; };
struct NonFiniteEntry : Error { using Error::Error; };
struct AsymmetryExceedsTolerance : Error { using Error::Error; };
struct DuplicateLabel : Error { using Error::Error; };
struct EmptyLabel : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };
struct InvalidPartition : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

namespace detail {

template <typename... Parts>
std::string concat(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// NodeSet

/// Ordered set of unique node labels. The index<->label bijection is fixed at
/// construction; every matrix in the pipeline addresses nodes by index into
/// one shared NodeSet.
class NodeSet {
 public:
  explicit NodeSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty())
        throw EmptyLabel(detail::concat("NodeSet: empty label at position ", i));
      auto [it, inserted] = index_.emplace(labels_[i], i);
      if (!inserted)
        throw DuplicateLabel(detail::concat("NodeSet: duplicate label '", labels_[i],
                                            "' at positions ", it->second, " and ", i));
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  const std::string& label(std::size_t i) const { return labels_.at(i); }

  bool contains(std::string_view label) const {
    return index_.find(std::string(label)) != index_.end();
  }

  /// Index of `label`; throws UnknownLabel if absent.
  std::size_t index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
      throw UnknownLabel(detail::concat("unknown node label '", label, "'"));
    return it->second;
  }

  std::optional<std::size_t> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const NodeSet& a, const NodeSet& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const NodeSet& a, const NodeSet& b) { return !(a == b); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline void check_square(const Matrix& values, const char* what) {
  if (values.rows() != values.cols())
    throw NonSquare(concat(what, ": matrix is ", values.rows(), "x", values.cols()));
}

inline void check_nodes_match(const Matrix& values, const NodeSet& nodes, const char* what) {
  if (static_cast<std::size_t>(values.rows()) != nodes.size())
    throw DimensionMismatch(concat(what, ": matrix side ", values.rows(),
                                   " does not match node set size ", nodes.size()));
}

inline void check_finite_nonnegative(const Matrix& values, const char* what) {
  for (Index i = 0; i < values.rows(); ++i)
    for (Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v))
        throw NonFiniteEntry(concat(what, ": non-finite entry at [", i, "][", j, "]"));
      if (v < 0.0)
        throw NegativeEntry(concat(what, ": negative entry ", v, " at [", i, "][", j, "]"));
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SimilarityMatrix

/// Square symmetric nonnegative matrix of similarity scores over a NodeSet.
/// The unit of exchange between all pipeline stages. Construction requires
/// exact symmetry; use validate_similarity() to admit matrices with small
/// floating-point asymmetries under an explicit tolerance.
class SimilarityMatrix {
 public:
  SimilarityMatrix(NodeSet nodes, Matrix values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    detail::check_square(values_, "SimilarityMatrix");
    detail::check_nodes_match(values_, nodes_, "SimilarityMatrix");
    detail::check_finite_nonnegative(values_, "SimilarityMatrix");
    for (Index i = 0; i < values_.rows(); ++i)
      for (Index j = i + 1; j < values_.cols(); ++j)
        if (values_(i, j) != values_(j, i))
          throw AsymmetryExceedsTolerance(detail::concat(
              "SimilarityMatrix: values[", i, "][", j, "] = ", values_(i, j),
              " != values[", j, "][", i, "] = ", values_(j, i)));
  }

  const NodeSet& nodes() const noexcept { return nodes_; }
  const Matrix& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  NodeSet nodes_;
  Matrix values_;
};

/// Admit a raw square matrix as a SimilarityMatrix. Entries whose asymmetry
/// |a-b| is at most `tolerance` are symmetrized to (a+b)/2; larger asymmetry
/// is rejected. This is the only silent repair in the data model.
inline SimilarityMatrix validate_similarity(const Matrix& values, NodeSet nodes,
                                            double tolerance = 0.0) {
  detail::check_square(values, "validate_similarity");
  detail::check_nodes_match(values, nodes, "validate_similarity");
  detail::check_finite_nonnegative(values, "validate_similarity");
  Matrix out = values;
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = i + 1; j < out.cols(); ++j) {
      const double a = out(i, j), b = out(j, i);
      if (a == b) continue;
      if (std::abs(a - b) <= tolerance) {
        const double avg = (a + b) / 2.0;
        out(i, j) = avg;
        out(j, i) = avg;
      } else {
        throw AsymmetryExceedsTolerance(detail::concat(
            "validate_similarity: |values[", i, "][", j, "] - values[", j, "][", i,
            "]| = ", std::abs(a - b), " exceeds tolerance ", tolerance));
      }
    }
  return SimilarityMatrix(std::move(nodes), std::move(out));
}

// ---------------------------------------------------------------------------
// DistanceMatrix

/// Square symmetric nonnegative matrix with zero diagonal; input
/// representation for the energy-statistics machinery.
class DistanceMatrix {
 public:
  DistanceMatrix(NodeSet nodes, Matrix values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    detail::check_square(values_, "DistanceMatrix");
    detail::check_nodes_match(values_, nodes_, "DistanceMatrix");
    detail::check_finite_nonnegative(values_, "DistanceMatrix");
    for (Index i = 0; i < values_.rows(); ++i) {
      if (values_(i, i) != 0.0)
        throw Error(detail::concat("DistanceMatrix: nonzero diagonal ", values_(i, i),
                                   " at [", i, "][", i, "]"));
      for (Index j = i + 1; j < values_.cols(); ++j)
        if (values_(i, j) != values_(j, i))
          throw AsymmetryExceedsTolerance(detail::concat(
              "DistanceMatrix: values[", i, "][", j, "] != values[", j, "][", i, "]"));
    }
  }

  const NodeSet& nodes() const noexcept { return nodes_; }
  const Matrix& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  NodeSet nodes_;
  Matrix values_;
};

// ---------------------------------------------------------------------------
// MultilayerNetwork

struct DuplicateLayerName : Error { using Error::Error; };

/// A multiplex: m >= 2 similarity layers over one identical NodeSet.
class MultilayerNetwork {
 public:
  MultilayerNetwork(std::vector<SimilarityMatrix> layers, std::vector<std::string> names)
      : layers_(std::move(layers)), names_(std::move(names)) {
    if (layers_.size() < 2)
      throw Error(detail::concat("MultilayerNetwork: needs >= 2 layers, got ", layers_.size()));
    if (names_.size() != layers_.size())
      throw DimensionMismatch(detail::concat("MultilayerNetwork: ", layers_.size(),
                                             " layers but ", names_.size(), " names"));
    for (std::size_t l = 0; l < names_.size(); ++l) {
      if (names_[l].empty())
        throw EmptyLabel(detail::concat("MultilayerNetwork: empty name for layer ", l));
      for (std::size_t p = 0; p < l; ++p)
        if (names_[p] == names_[l])
          throw DuplicateLayerName(detail::concat("MultilayerNetwork: duplicate layer name '",
                                                  names_[l], "'"));
    }
    for (std::size_t l = 1; l < layers_.size(); ++l)
      if (layers_[l].nodes() != layers_[0].nodes())
        throw DimensionMismatch(detail::concat(
            "MultilayerNetwork: layer '", names_[l],
            "' does not share the node set of layer '", names_[0], "'"));
  }

  std::size_t num_layers() const noexcept { return layers_.size(); }
  const NodeSet& nodes() const noexcept { return layers_[0].nodes(); }
  const std::vector<SimilarityMatrix>& layers() const noexcept { return layers_; }
  const std::vector<std::string>& layer_names() const noexcept { return names_; }

  const SimilarityMatrix& layer(std::size_t l) const { return layers_.at(l); }
  const std::string& layer_name(std::size_t l) const { return names_.at(l); }

  const SimilarityMatrix& layer(std::string_view name) const {
    for (std::size_t l = 0; l < names_.size(); ++l)
      if (names_[l] == name) return layers_[l];
    throw UnknownLabel(detail::concat("unknown layer name '", name, "'"));
  }

 private:
  std::vector<SimilarityMatrix> layers_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Partition

/// Assignment of every node to exactly one community. Community ids are
/// 0-based and contiguous.
class Partition {
 public:
  Partition(NodeSet nodes, std::vector<int> membership)
      : nodes_(std::move(nodes)), membership_(std::move(membership)) {
    if (membership_.size() != nodes_.size())
      throw InvalidPartition(detail::concat("Partition: ", membership_.size(),
                                            " assignments for ", nodes_.size(), " nodes"));
    if (membership_.empty()) throw InvalidPartition("Partition: empty node set");
    int max_id = -1;
    for (std::size_t i = 0; i < membership_.size(); ++i) {
      if (membership_[i] < 0)
        throw InvalidPartition(detail::concat("Partition: negative community id at node ", i));
      max_id = std::max(max_id, membership_[i]);
    }
    num_communities_ = max_id + 1;
    std::vector<bool> seen(static_cast<std::size_t>(num_communities_), false);
    for (int c : membership_) seen[static_cast<std::size_t>(c)] = true;
    for (int c = 0; c < num_communities_; ++c)
      if (!seen[static_cast<std::size_t>(c)])
        throw InvalidPartition(detail::concat("Partition: community ids have a gap at ", c));
  }

  /// One community per node.
  static Partition singletons(NodeSet nodes) {
    std::vector<int> membership(nodes.size());
    for (std::size_t i = 0; i < membership.size(); ++i) membership[i] = static_cast<int>(i);
    return Partition(std::move(nodes), std::move(membership));
  }

  const NodeSet& nodes() const noexcept { return nodes_; }
  const std::vector<int>& membership() const noexcept { return membership_; }
  int num_communities() const noexcept { return num_communities_; }
  int community(std::size_t node) const { return membership_.at(node); }

  /// Node indices of community `c`, in node order.
  std::vector<std::size_t> members(int c) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < membership_.size(); ++i)
      if (membership_[i] == c) out.push_back(i);
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.nodes_ == b.nodes_ && a.membership_ == b.membership_;
  }

 private:
  NodeSet nodes_;
  std::vector<int> membership_;
  int num_communities_ = 0;
};

/// Renumber community ids by order of first appearance along the node order.
inline std::vector<int> canonicalize_membership(const std::vector<int>& membership) {
  std::unordered_map<int, int> remap;
  std::vector<int> out(membership.size());
  int next = 0;
  for (std::size_t i = 0; i < membership.size(); ++i) {
    auto [it, inserted] = remap.emplace(membership[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

}  // namespace netfuse
