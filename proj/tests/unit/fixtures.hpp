#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "certun/graph.hpp"
#include "certun/rng.hpp"

namespace fixtures {

using certun::AttributedGraph;
using certun::Edge;
using certun::GraphData;
using certun::NodeId;

/// n nodes on a path 0-1-...-(n-1); all nodes train, feature_dim d,
/// deterministic features, labels v % c.
inline GraphData path_data(std::size_t n, std::size_t d = 2, std::size_t c = 2) {
  GraphData data;
  data.num_nodes = n;
  data.feature_dim = d;
  data.num_classes = c;
  for (NodeId v = 0; v + 1 < n; ++v) data.edges.push_back({v, v + 1});
  data.features = certun::Matrix(n, d);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 0; j < d; ++j) data.features(v, j) = std::sin(1.0 + 3.0 * v + 0.7 * j);
  data.labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) data.labels[v] = static_cast<std::int32_t>(v % c);
  data.train_mask.assign(n, 1);
  data.test_mask.assign(n, 0);
  return data;
}

inline AttributedGraph path(std::size_t n, std::size_t d = 2, std::size_t c = 2) {
  return AttributedGraph::build(path_data(n, d, c));
}

/// Erdos-Renyi graph with Gaussian features correlated with the label;
/// roughly 3/4 of nodes train and the rest test.
inline AttributedGraph random_graph(std::uint64_t seed, std::size_t n, std::size_t d, std::size_t c,
                                    double p_edge) {
  certun::Rng rng(seed);
  GraphData data;
  data.num_nodes = n;
  data.feature_dim = d;
  data.num_classes = c;
  data.labels.resize(n);
  data.features = certun::Matrix(n, d);
  data.train_mask.assign(n, 0);
  data.test_mask.assign(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    data.labels[v] = static_cast<std::int32_t>(rng.below(c));
    for (std::size_t j = 0; j < d; ++j) data.features(v, j) = rng.normal();
    data.features(v, static_cast<std::size_t>(data.labels[v]) % d) += 1.5;
    (rng.uniform() < 0.75 ? data.train_mask : data.test_mask)[v] = 1;
  }
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform() < p_edge) data.edges.push_back({u, v});
  return AttributedGraph::build(std::move(data));
}

inline std::vector<double> random_vector(certun::Rng& rng, std::size_t p, double scale = 1.0) {
  std::vector<double> v(p);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("certun_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
