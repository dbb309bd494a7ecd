#include "certun/graph.hpp"

#include <algorithm>
#include <numeric>

#include "certun/error.hpp"

namespace certun {

NodeSet::NodeSet(std::initializer_list<NodeId> ids) : ids_(ids) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

NodeSet NodeSet::from_unsorted(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return from_sorted(std::move(ids));
}

NodeSet NodeSet::from_sorted(std::vector<NodeId> ids) {
  NodeSet s;
  s.ids_ = std::move(ids);
  return s;
}

bool NodeSet::contains(NodeId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

bool NodeSet::intersects(const NodeSet& other) const {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

NodeSet NodeSet::united(const NodeSet& other) const {
  std::vector<NodeId> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out));
  return from_sorted(std::move(out));
}

NodeSet NodeSet::intersected(const NodeSet& other) const {
  std::vector<NodeId> out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out));
  return from_sorted(std::move(out));
}

NodeSet NodeSet::minus(const NodeSet& other) const {
  std::vector<NodeId> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                      std::back_inserter(out));
  return from_sorted(std::move(out));
}

AttributedGraph AttributedGraph::build(GraphData data, std::vector<std::string>* warnings) {
  const std::size_t n = data.num_nodes;
  if (data.features.rows != n || data.features.cols != data.feature_dim)
    throw Error(ErrorCode::Validation, "feature matrix shape does not match num_nodes x feature_dim");
  if (data.labels.size() != n || data.train_mask.size() != n || data.test_mask.size() != n)
    throw Error(ErrorCode::Validation, "labels and masks must have num_nodes entries");
  if (!data.removed.empty() && data.removed.size() != n)
    throw Error(ErrorCode::Validation, "removed mask must be empty or have num_nodes entries");

  for (std::size_t v = 0; v < n; ++v) {
    const auto y = data.labels[v];
    if (y < -1 || (y >= 0 && static_cast<std::size_t>(y) >= data.num_classes))
      throw Error(ErrorCode::Validation,
                  "label " + std::to_string(y) + " of node " + std::to_string(v) + " out of range");
    if (data.train_mask[v] && data.test_mask[v])
      throw Error(ErrorCode::Validation, "node " + std::to_string(v) + " is in both train and test");
    if (data.train_mask[v] && y < 0)
      throw Error(ErrorCode::Validation, "training node " + std::to_string(v) + " has no label");
  }
  if (!all_finite(data.features.data))
    throw Error(ErrorCode::Validation, "features contain non-finite values");

  std::vector<Edge> directed;
  directed.reserve(data.edges.size() * 2);
  for (const Edge& e : data.edges) {
    if (e.u >= n || e.v >= n)
      throw Error(ErrorCode::InvalidEdge, "edge (" + std::to_string(e.u) + ", " +
                                              std::to_string(e.v) + ") references a missing node");
    if (e.u == e.v)
      throw Error(ErrorCode::InvalidEdge, "self-loop on node " + std::to_string(e.u));
    directed.push_back({e.u, e.v});
    directed.push_back({e.v, e.u});
  }
  std::sort(directed.begin(), directed.end());
  const std::size_t before = directed.size();
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  if (warnings && before != directed.size())
    warnings->push_back("collapsed " + std::to_string((before - directed.size()) / 2) +
                        " duplicate edges");

  AttributedGraph g;
  g.num_nodes_ = n;
  g.feature_dim_ = data.feature_dim;
  g.num_classes_ = data.num_classes;
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : directed) ++g.offsets_[e.u + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.columns_.reserve(directed.size());
  for (const Edge& e : directed) g.columns_.push_back(e.v);
  g.features_ = std::move(data.features);
  g.labels_ = std::move(data.labels);
  g.train_ = std::move(data.train_mask);
  g.test_ = std::move(data.test_mask);
  g.removed_ = data.removed.empty() ? std::vector<std::uint8_t>(n, 0) : std::move(data.removed);
  return g;
}

bool AttributedGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes_ || v >= num_nodes_) return false;
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

NodeSet AttributedGraph::train_nodes() const {
  std::vector<NodeId> ids;
  for (NodeId v = 0; v < num_nodes_; ++v)
    if (train_[v]) ids.push_back(v);
  return NodeSet::from_sorted(std::move(ids));
}

NodeSet AttributedGraph::test_nodes() const {
  std::vector<NodeId> ids;
  for (NodeId v = 0; v < num_nodes_; ++v)
    if (test_[v]) ids.push_back(v);
  return NodeSet::from_sorted(std::move(ids));
}

std::size_t AttributedGraph::num_train() const {
  return static_cast<std::size_t>(std::count(train_.begin(), train_.end(), std::uint8_t{1}));
}

std::vector<Edge> AttributedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes_; ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

void AttributedGraph::check_node(NodeId v) const {
  if (v >= num_nodes_)
    throw Error(ErrorCode::InvalidNode,
                "node " + std::to_string(v) + " out of range (n = " + std::to_string(num_nodes_) + ")");
}

GraphData AttributedGraph::to_data() const {
  GraphData d;
  d.num_nodes = num_nodes_;
  d.feature_dim = feature_dim_;
  d.num_classes = num_classes_;
  d.edges = edges();
  d.features = features_;
  d.labels = labels_;
  d.train_mask = train_;
  d.test_mask = test_;
  d.removed = removed_;
  return d;
}

namespace {

// Breadth-first search bounded at depth k. `dist` must be all -1 on entry
// and is restored before returning; visited nodes go to `out`.
void bounded_bfs(const AttributedGraph& g, NodeId source, int k, std::vector<int>& dist,
                 std::vector<NodeId>& queue, std::vector<NodeId>& out) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    if (dist[u] == k) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  for (NodeId u : queue) {
    if (u != source) out.push_back(u);
    dist[u] = -1;
  }
}

}  // namespace

NodeSet k_hop_neighbors(const AttributedGraph& g, NodeId v, int k) {
  g.check_node(v);
  if (k < 1) throw Error(ErrorCode::Config, "propagation depth k must be >= 1");
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<NodeId> queue, out;
  bounded_bfs(g, v, k, dist, queue, out);
  return NodeSet::from_unsorted(std::move(out));
}

NodeSet k_hop_union(const AttributedGraph& g, const NodeSet& sources, int k, const NodeSet* filter) {
  if (k < 1) throw Error(ErrorCode::Config, "propagation depth k must be >= 1");
  for (NodeId s : sources) g.check_node(s);
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<NodeId> queue, out;
  for (NodeId s : sources) bounded_bfs(g, s, k, dist, queue, out);
  NodeSet result = NodeSet::from_unsorted(std::move(out));
  return filter ? result.intersected(*filter) : result;
}

NodeSet edge_endpoints(const AttributedGraph& g, std::span<const Edge> edges) {
  std::vector<NodeId> ids;
  ids.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    g.check_node(e.u);
    g.check_node(e.v);
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  return NodeSet::from_unsorted(std::move(ids));
}

NodeSet attribute_owners(const AttributedGraph& g, std::span<const AttributeEntry> entries) {
  std::vector<NodeId> ids;
  ids.reserve(entries.size());
  for (const auto& e : entries) {
    g.check_node(e.node);
    if (e.dim >= g.feature_dim())
      throw Error(ErrorCode::InvalidAttribute, "attribute dim " + std::to_string(e.dim) +
                                                   " of node " + std::to_string(e.node) +
                                                   " out of range (d = " +
                                                   std::to_string(g.feature_dim()) + ")");
    ids.push_back(e.node);
  }
  return NodeSet::from_unsorted(std::move(ids));
}

}  // namespace certun
