#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "certun/linalg.hpp"

namespace certun {

using NodeId = std::uint32_t;

/// Undirected edge. Canonical form has u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge canonical() const { return u < v ? *this : Edge{v, u}; }
  auto operator<=>(const Edge&) const = default;
};

/// Sorted, deduplicated node ids.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids);

  static NodeSet from_unsorted(std::vector<NodeId> ids);
  /// Adopts ids that the caller guarantees are strictly increasing.
  static NodeSet from_sorted(std::vector<NodeId> ids);

  bool contains(NodeId v) const;
  bool intersects(const NodeSet& other) const;
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  NodeSet united(const NodeSet& other) const;
  NodeSet intersected(const NodeSet& other) const;
  NodeSet minus(const NodeSet& other) const;

  std::span<const NodeId> ids() const noexcept { return ids_; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  bool operator==(const NodeSet&) const = default;

 private:
  std::vector<NodeId> ids_;
};

/// Mutable description of a graph, used to construct an AttributedGraph.
/// Edges may be given in either orientation and with duplicates.
struct GraphData {
  std::size_t num_nodes = 0;
  std::size_t feature_dim = 0;
  std::size_t num_classes = 0;
  std::vector<Edge> edges;
  Matrix features;               // num_nodes x feature_dim
  std::vector<std::int32_t> labels;  // -1 marks an unlabeled node
  std::vector<std::uint8_t> train_mask;
  std::vector<std::uint8_t> test_mask;
  std::vector<std::uint8_t> removed;  // optional; empty means none removed
};

/// Immutable attributed graph with canonical CSR adjacency.
///
/// Nodes deleted by an unlearning request stay in place as isolated,
/// zero-featured placeholders with both masks cleared, so node ids are
/// stable across every graph derived from the same source.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  /// Symmetrizes and deduplicates edges; throws on self-loops, dangling
  /// ids, bad labels, shape mismatches or overlapping masks. Collapsed
  /// duplicates are reported through `warnings` when given.
  static AttributedGraph build(GraphData data, std::vector<std::string>* warnings = nullptr);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t feature_dim() const noexcept { return feature_dim_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return columns_.size() / 2; }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> columns() const noexcept { return columns_; }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {columns_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  const Matrix& features() const noexcept { return features_; }
  std::span<const double> feature_row(NodeId v) const { return features_.row(v); }

  std::int32_t label(NodeId v) const { return labels_[v]; }
  std::span<const std::int32_t> labels() const noexcept { return labels_; }
  bool is_train(NodeId v) const { return train_[v] != 0; }
  bool is_test(NodeId v) const { return test_[v] != 0; }
  bool is_removed(NodeId v) const { return removed_[v] != 0; }

  NodeSet train_nodes() const;
  NodeSet test_nodes() const;
  std::size_t num_train() const;
  /// Canonical (u < v) edge list in CSR order.
  std::vector<Edge> edges() const;

  /// Throws ErrorCode::InvalidNode when v is out of range.
  void check_node(NodeId v) const;

  GraphData to_data() const;

  bool operator==(const AttributedGraph&) const = default;

 private:
  std::size_t num_nodes_ = 0;
  std::size_t feature_dim_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> columns_;
  Matrix features_;
  std::vector<std::int32_t> labels_;
  std::vector<std::uint8_t> train_;
  std::vector<std::uint8_t> test_;
  std::vector<std::uint8_t> removed_;
};

/// Nodes at shortest-path distance 1..k from v (v excluded).
NodeSet k_hop_neighbors(const AttributedGraph& g, NodeId v, int k);

/// Union of k_hop_neighbors over `sources`, intersected with `filter` when
/// one is given. A source is included only if it lies within k hops of a
/// different source.
NodeSet k_hop_union(const AttributedGraph& g, const NodeSet& sources, int k,
                    const NodeSet* filter = nullptr);

/// All endpoints of the given edges.
NodeSet edge_endpoints(const AttributedGraph& g, std::span<const Edge> edges);

struct AttributeEntry {
  NodeId node = 0;
  std::size_t dim = 0;
};

/// Distinct owners of the given (node, dim) entries.
NodeSet attribute_owners(const AttributedGraph& g, std::span<const AttributeEntry> entries);

}  // namespace certun
