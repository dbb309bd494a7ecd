#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "certun/graph.hpp"

namespace certun {

struct PartialAttributes {
  NodeId node = 0;
  std::vector<std::size_t> dims;  // sorted, deduplicated

  bool operator==(const PartialAttributes&) const = default;
};

/// A combined unlearning request: nodes, edges, whole attribute rows and
/// individual attribute entries. Nodes in `nodes` implicitly take their
/// incident edges and attributes with them.
struct UnlearnRequest {
  NodeSet nodes;
  std::vector<Edge> edges;  // canonical, sorted, unique
  NodeSet attrs_full;
  std::vector<PartialAttributes> attrs_partial;  // sorted by node

  bool empty() const {
    return nodes.empty() && edges.empty() && attrs_full.empty() && attrs_partial.empty();
  }

  /// Canonicalizes edge orientation/order, sorts and merges partial entries.
  void normalize();

  /// Flattened (node, dim) entries for both attribute categories.
  std::vector<AttributeEntry> attribute_entries(std::size_t feature_dim) const;

  bool operator==(const UnlearnRequest&) const = default;
};

enum class RequestCategory { Nodes = 0, FullAttributes = 1, PartialAttributes = 2, Edges = 3 };

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every invariant the request violates against `g`.
ValidationReport validate(const AttributedGraph& g, const UnlearnRequest& req);

/// Throws ErrorCode::Validation carrying the joined violations.
void require_valid(const AttributedGraph& g, const UnlearnRequest& req);

struct DeletionResult {
  AttributedGraph graph;
  std::vector<std::string> warnings;
};

/// Applies the request: deleted nodes lose edges, features and mask bits;
/// deleted edges disappear; unlearned attribute entries become 0.0.
/// Entities that are already gone are skipped with a warning.
DeletionResult apply_deletion(const AttributedGraph& g, const UnlearnRequest& req);

/// Training nodes whose loss terms change under a request, split by
/// request category. The un-tilded sets index losses on the graph after
/// deletion, the tilded sets losses on the original graph.
struct AffectedSets {
  NodeSet v1, v2, v3, v4;
  NodeSet v1t, v2t, v3t, v4t;
  /// Training nodes whose computation graph touches any unlearned entity;
  /// drives the distance bound.
  NodeSet v_tilde;
  std::array<bool, 4> alphas{};

  std::array<const NodeSet*, 4> added() const { return {&v1, &v2, &v3, &v4}; }
  std::array<const NodeSet*, 4> subtracted() const { return {&v1t, &v2t, &v3t, &v4t}; }

  /// True when the un-tilded sets are pairwise disjoint and so are the
  /// tilded ones.
  bool pairwise_disjoint() const;
  /// Nodes appearing in more than one active category (diagnostics).
  std::size_t cross_category_overlap() const;
};

/// Computes the affected sets on the topology of `g` with depth k.
AffectedSets compute_affected_sets(const AttributedGraph& g, const UnlearnRequest& req, int k);

using RequestBatch = std::vector<UnlearnRequest>;

/// Returns {req} when its affected sets are already pairwise disjoint,
/// otherwise one request per non-empty category in the order nodes, full
/// attributes, partial attributes, edges. Edges and attribute entries that
/// belong to deleted nodes are dropped from later passes.
RequestBatch split_for_serializability(const AttributedGraph& g, const UnlearnRequest& req, int k);

/// Splits into single-category requests regardless of overlap.
RequestBatch split_by_category(const UnlearnRequest& req);

/// JSON: {"nodes":[..], "edges":[[u,v],..], "attrs_full":[..],
///        "attrs_partial":[{"node":v,"dims":[..]},..]}; missing keys are empty.
UnlearnRequest parse_request_json(const std::string& text);
std::string request_to_json(const UnlearnRequest& req);
UnlearnRequest load_request(const std::filesystem::path& path);
void save_request(const UnlearnRequest& req, const std::filesystem::path& path);

}  // namespace certun
