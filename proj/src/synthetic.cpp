#include "certun/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "certun/error.hpp"
#include "certun/rng.hpp"

namespace certun {

void SyntheticSpec::check() const {
  std::vector<std::string> problems;
  if (num_nodes == 0) problems.push_back("num_nodes must be >= 1");
  if (num_classes == 0) problems.push_back("num_classes must be >= 1");
  if (feature_dim == 0) problems.push_back("feature_dim must be >= 1");
  if (!(p_intra >= 0.0 && p_intra <= 1.0)) problems.push_back("p_intra must be in [0, 1]");
  if (!(p_inter >= 0.0 && p_inter <= 1.0)) problems.push_back("p_inter must be in [0, 1]");
  if (!(noise >= 0.0)) problems.push_back("noise must be >= 0");
  if (!std::isfinite(separation)) problems.push_back("separation must be finite");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    problems.push_back("train_fraction must be in (0, 1]");
  if (problems.empty()) return;
  std::string msg = "invalid synthetic spec:";
  for (const auto& p : problems) msg += " " + p + ";";
  msg.pop_back();
  throw Error(ErrorCode::Config, msg);
}

AttributedGraph gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.check();
  Rng rng(seed);
  const std::size_t n = spec.num_nodes;

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  GraphData data;
  data.num_nodes = n;
  data.feature_dim = spec.feature_dim;
  data.num_classes = spec.num_classes;
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    data.labels[order[i]] = static_cast<std::int32_t>(i % spec.num_classes);

  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = data.labels[u] == data.labels[v] ? spec.p_intra : spec.p_inter;
      if (rng.uniform() < p) data.edges.push_back({u, v});
    }

  data.features = Matrix(n, spec.feature_dim);
  for (NodeId v = 0; v < n; ++v) {
    auto row = data.features.row(v);
    for (double& x : row) x = rng.normal(0.0, spec.noise);
    row[static_cast<std::size_t>(data.labels[v]) % spec.feature_dim] += spec.separation;
  }

  // Stratified split: within each class, nodes in permutation order; the
  // first round(train_fraction * size) train, the rest test.
  data.train_mask.assign(n, 0);
  data.test_mask.assign(n, 0);
  std::vector<std::vector<NodeId>> by_class(spec.num_classes);
  for (NodeId v : order) by_class[static_cast<std::size_t>(data.labels[v])].push_back(v);
  for (const auto& members : by_class) {
    const auto n_train = static_cast<std::size_t>(spec.train_fraction * members.size() + 0.5);
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < n_train ? data.train_mask : data.test_mask)[members[i]] = 1;
  }
  return AttributedGraph::build(std::move(data));
}

}  // namespace certun
