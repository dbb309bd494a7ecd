#include "certun/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "certun/error.hpp"
#include "certun/rng.hpp"

namespace certun {

double f1_micro(const Objective& objective, std::span<const double> theta) {
  const auto& g = objective.graph();
  const NodeSet test = g.test_nodes();
  if (test.empty()) throw Error(ErrorCode::Validation, "f1_micro needs a non-empty test set");
  const auto pred = objective.predict(theta);
  std::size_t correct = 0;
  for (NodeId v : test)
    if (pred[v] == g.label(v)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

double roc_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty())
    throw Error(ErrorCode::Validation, "AUC needs non-empty positive and negative sets");
  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(positives.size() + negatives.size());
  for (double s : positives) all.push_back({s, true});
  for (double s : negatives) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t t = i; t < j; ++t)
      if (all[t].positive) positive_rank_sum += avg_rank;
    i = j;
  }
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double mi_proxy_auc(const Objective& original, std::span<const double> theta, const NodeSet& unlearned,
                    const NodeSet& holdout) {
  if (unlearned.empty() || holdout.empty())
    throw Error(ErrorCode::Validation, "membership proxy needs non-empty unlearned and holdout sets");
  auto pos = original.node_losses(theta, unlearned.ids());
  auto neg = original.node_losses(theta, holdout.ids());
  for (double& s : pos) s = -s;
  for (double& s : neg) s = -s;
  return roc_auc(pos, neg);
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace

double mi_proxy_auc_edges(const Objective& original, std::span<const double> theta,
                          std::span<const Edge> unlearned, std::span<const Edge> negatives) {
  if (unlearned.empty() || negatives.empty())
    throw Error(ErrorCode::Validation, "link proxy needs non-empty edge sets");
  const Matrix probs = original.probabilities(theta);
  const auto score = [&](std::span<const Edge> edges) {
    std::vector<double> out;
    for (const Edge& e : edges) {
      original.graph().check_node(e.u);
      original.graph().check_node(e.v);
      out.push_back(cosine(probs.row(e.u), probs.row(e.v)));
    }
    return out;
  };
  return roc_auc(score(unlearned), score(negatives));
}

std::vector<Edge> sample_negative_edges(const AttributedGraph& g, std::size_t count, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (n < 2 || static_cast<double>(count) > pairs - static_cast<double>(g.num_edges()))
    throw Error(ErrorCode::Validation, "not enough non-edges to sample " + std::to_string(count));
  Rng rng(seed);
  std::set<Edge> chosen;
  std::vector<Edge> out;
  while (out.size() < count) {
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    if (u == v || g.has_edge(u, v)) continue;
    const Edge e = Edge{u, v}.canonical();
    if (chosen.insert(e).second) out.push_back(e);
  }
  return out;
}

double attr_unlearn_loss(const ModelSpec& spec, std::span<const double> theta, const AttributedGraph& g,
                         const UnlearnRequest& req) {
  if (req.attrs_full.empty() && req.attrs_partial.empty())
    throw Error(ErrorCode::Validation, "attribute unlearning loss needs attribute entries");
  UnlearnRequest attrs;
  attrs.attrs_full = req.attrs_full;
  attrs.attrs_partial = req.attrs_partial;
  const auto entries = attrs.attribute_entries(g.feature_dim());
  const NodeSet owners = attribute_owners(g, entries);
  const AttributedGraph zeroed = apply_deletion(g, attrs).graph;
  const Objective objective(zeroed, spec, NodeSet{});
  double total = 0.0;
  for (double l : objective.node_losses(theta, owners.ids())) total += l;
  return total / static_cast<double>(owners.size());
}

}  // namespace certun
