#include "certun/request.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "certun/error.hpp"

namespace certun {

void UnlearnRequest::normalize() {
  for (Edge& e : edges) e = e.canonical();
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::sort(attrs_partial.begin(), attrs_partial.end(),
            [](const auto& a, const auto& b) { return a.node < b.node; });
  std::vector<PartialAttributes> merged;
  for (auto& entry : attrs_partial) {
    if (!merged.empty() && merged.back().node == entry.node)
      merged.back().dims.insert(merged.back().dims.end(), entry.dims.begin(), entry.dims.end());
    else
      merged.push_back(std::move(entry));
  }
  for (auto& entry : merged) {
    std::sort(entry.dims.begin(), entry.dims.end());
    entry.dims.erase(std::unique(entry.dims.begin(), entry.dims.end()), entry.dims.end());
  }
  attrs_partial = std::move(merged);
}

std::vector<AttributeEntry> UnlearnRequest::attribute_entries(std::size_t feature_dim) const {
  std::vector<AttributeEntry> out;
  for (NodeId v : attrs_full)
    for (std::size_t j = 0; j < feature_dim; ++j) out.push_back({v, j});
  for (const auto& p : attrs_partial)
    for (std::size_t j : p.dims) out.push_back({p.node, j});
  return out;
}

ValidationReport validate(const AttributedGraph& g, const UnlearnRequest& req) {
  ValidationReport report;
  auto& out = report.violations;
  const auto n = g.num_nodes();
  const auto node_ok = [&](NodeId v, const char* field) {
    if (v < n) return true;
    out.push_back(std::string(field) + ": node " + std::to_string(v) + " out of range");
    return false;
  };

  for (NodeId v : req.nodes) node_ok(v, "nodes");
  for (const Edge& e : req.edges) {
    if (!node_ok(e.u, "edges") || !node_ok(e.v, "edges")) continue;
    if (e.u == e.v)
      out.push_back("edges: self-loop (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    else if (!g.has_edge(e.u, e.v))
      out.push_back("edges: unknown edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
  }
  for (NodeId v : req.attrs_full) node_ok(v, "attrs_full");

  std::set<NodeId> partial_nodes;
  for (const auto& p : req.attrs_partial) {
    if (!node_ok(p.node, "attrs_partial")) continue;
    const std::string who = "attrs_partial: node " + std::to_string(p.node);
    if (!partial_nodes.insert(p.node).second) out.push_back(who + " listed twice");
    if (p.dims.empty()) out.push_back(who + " has no dims");
    std::set<std::size_t> dims;
    for (std::size_t j : p.dims) {
      if (j >= g.feature_dim())
        out.push_back(who + " dim " + std::to_string(j) + " out of range");
      else
        dims.insert(j);
    }
    if (g.feature_dim() > 0 && dims.size() == g.feature_dim())
      out.push_back(who + ": partial must retain >=1 dim (declare it in attrs_full)");
    if (req.attrs_full.contains(p.node))
      out.push_back(who + " also appears in attrs_full");
  }
  return report;
}

void require_valid(const AttributedGraph& g, const UnlearnRequest& req) {
  const auto report = validate(g, req);
  if (report.ok()) return;
  std::string msg = "invalid unlearning request:";
  for (const auto& v : report.violations) msg += "\n  " + v;
  throw Error(ErrorCode::Validation, msg);
}

DeletionResult apply_deletion(const AttributedGraph& g, const UnlearnRequest& req) {
  DeletionResult result;
  auto& warnings = result.warnings;
  GraphData data = g.to_data();
  const auto d = g.feature_dim();

  std::vector<Edge> dropped(req.edges.begin(), req.edges.end());
  for (Edge& e : dropped) e = e.canonical();
  std::sort(dropped.begin(), dropped.end());
  for (const Edge& e : dropped)
    if (!g.has_edge(e.u, e.v))
      warnings.push_back("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") not present; skipped");

  for (NodeId v : req.nodes) {
    g.check_node(v);
    if (g.is_removed(v)) warnings.push_back("node " + std::to_string(v) + " already removed; skipped");
    std::fill(data.features.row(v).begin(), data.features.row(v).end(), 0.0);
    data.train_mask[v] = 0;
    data.test_mask[v] = 0;
    data.removed[v] = 1;
  }
  std::erase_if(data.edges, [&](const Edge& e) {
    return req.nodes.contains(e.u) || req.nodes.contains(e.v) ||
           std::binary_search(dropped.begin(), dropped.end(), e);
  });

  for (NodeId v : req.attrs_full) {
    g.check_node(v);
    auto row = data.features.row(v);
    std::fill(row.begin(), row.end(), 0.0);
  }
  for (const auto& p : req.attrs_partial) {
    g.check_node(p.node);
    for (std::size_t j : p.dims) {
      if (j >= d)
        throw Error(ErrorCode::InvalidAttribute, "attribute dim " + std::to_string(j) +
                                                     " of node " + std::to_string(p.node) +
                                                     " out of range");
      data.features(p.node, j) = 0.0;
    }
  }
  result.graph = AttributedGraph::build(std::move(data));
  return result;
}

bool AffectedSets::pairwise_disjoint() const {
  const auto add = added();
  const auto sub = subtracted();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (add[i]->intersects(*add[j]) || sub[i]->intersects(*sub[j])) return false;
  return true;
}

std::size_t AffectedSets::cross_category_overlap() const {
  std::vector<NodeId> all;
  for (const NodeSet* s : subtracted()) all.insert(all.end(), s->begin(), s->end());
  std::sort(all.begin(), all.end());
  std::size_t dup = 0;
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i] == all[i - 1] && (i < 2 || all[i - 2] != all[i])) ++dup;
  return dup;
}

namespace {

NodeSet partial_owners(const UnlearnRequest& req) {
  std::vector<NodeId> ids;
  for (const auto& p : req.attrs_partial) ids.push_back(p.node);
  return NodeSet::from_unsorted(std::move(ids));
}

}  // namespace

AffectedSets compute_affected_sets(const AttributedGraph& g, const UnlearnRequest& req, int k) {
  if (k < 1) throw Error(ErrorCode::Config, "propagation depth k must be >= 1");
  AffectedSets s;
  const NodeSet train = g.train_nodes();
  const NodeSet train_after = train.minus(req.nodes);
  const NodeSet full = req.attrs_full;
  const NodeSet partial = partial_owners(req);
  const NodeSet endpoints = edge_endpoints(g, req.edges);

  s.alphas = {!req.nodes.empty(), !full.empty(), !partial.empty(), !req.edges.empty()};

  if (s.alphas[0]) {
    s.v1 = k_hop_union(g, req.nodes, k, &train_after);
    s.v1t = k_hop_union(g, req.nodes, k, &train).united(req.nodes);
  }
  if (s.alphas[1]) {
    s.v2 = full.united(k_hop_union(g, full, k, &train_after));
    s.v2t = full.united(k_hop_union(g, full, k, &train));
  }
  if (s.alphas[2]) {
    s.v3 = partial.united(k_hop_union(g, partial, k, &train_after));
    s.v3t = partial.united(k_hop_union(g, partial, k, &train));
  }
  if (s.alphas[3]) {
    s.v4 = k_hop_union(g, endpoints, k, &train);
    s.v4t = s.v4;
  }
  s.v_tilde = s.v1.united(s.v4).united(k_hop_union(g, full.united(partial), k, &train));
  return s;
}

RequestBatch split_by_category(const UnlearnRequest& req) {
  RequestBatch batch;
  if (!req.nodes.empty()) {
    UnlearnRequest r;
    r.nodes = req.nodes;
    batch.push_back(std::move(r));
  }
  if (!req.attrs_full.empty()) {
    UnlearnRequest r;
    r.attrs_full = req.attrs_full.minus(req.nodes);
    if (!r.attrs_full.empty()) batch.push_back(std::move(r));
  }
  if (!req.attrs_partial.empty()) {
    UnlearnRequest r;
    for (const auto& p : req.attrs_partial)
      if (!req.nodes.contains(p.node)) r.attrs_partial.push_back(p);
    if (!r.attrs_partial.empty()) batch.push_back(std::move(r));
  }
  if (!req.edges.empty()) {
    UnlearnRequest r;
    for (const Edge& e : req.edges)
      if (!req.nodes.contains(e.u) && !req.nodes.contains(e.v)) r.edges.push_back(e);
    if (!r.edges.empty()) batch.push_back(std::move(r));
  }
  return batch;
}

RequestBatch split_for_serializability(const AttributedGraph& g, const UnlearnRequest& req, int k) {
  if (req.empty()) return {req};
  const auto sets = compute_affected_sets(g, req, k);
  const int active = static_cast<int>(std::count(sets.alphas.begin(), sets.alphas.end(), true));
  if (active <= 1 || sets.pairwise_disjoint()) return {req};
  return split_by_category(req);
}

UnlearnRequest parse_request_json(const std::string& text) {
  UnlearnRequest req;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::Parse, "request must be a JSON object");
    std::vector<NodeId> nodes, full;
    if (j.contains("nodes")) nodes = j.at("nodes").get<std::vector<NodeId>>();
    if (j.contains("attrs_full")) full = j.at("attrs_full").get<std::vector<NodeId>>();
    if (j.contains("edges"))
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
          throw Error(ErrorCode::Parse, "each edge must be a [u, v] pair");
        req.edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
      }
    if (j.contains("attrs_partial"))
      for (const auto& p : j.at("attrs_partial"))
        req.attrs_partial.push_back(
            {p.at("node").get<NodeId>(), p.at("dims").get<std::vector<std::size_t>>()});
    req.nodes = NodeSet::from_unsorted(std::move(nodes));
    req.attrs_full = NodeSet::from_unsorted(std::move(full));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("request JSON: ") + e.what());
  }
  req.normalize();
  return req;
}

std::string request_to_json(const UnlearnRequest& req) {
  nlohmann::json j;
  j["nodes"] = std::vector<NodeId>(req.nodes.begin(), req.nodes.end());
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : req.edges) j["edges"].push_back({e.u, e.v});
  j["attrs_full"] = std::vector<NodeId>(req.attrs_full.begin(), req.attrs_full.end());
  j["attrs_partial"] = nlohmann::json::array();
  for (const auto& p : req.attrs_partial) j["attrs_partial"].push_back({{"node", p.node}, {"dims", p.dims}});
  return j.dump(2);
}

UnlearnRequest load_request(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open request file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_request_json(ss.str());
}

void save_request(const UnlearnRequest& req, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write request file " + path.string());
  out << request_to_json(req) << '\n';
}

}  // namespace certun
