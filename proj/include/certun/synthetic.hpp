#pragma once

#include <cstdint>

#include "certun/graph.hpp"

namespace certun {

/// Stochastic block model with Gaussian class-conditional features.
struct SyntheticSpec {
  std::size_t num_nodes = 300;
  std::size_t num_classes = 4;
  double p_intra = 0.05;
  double p_inter = 0.005;
  std::size_t feature_dim = 16;
  double separation = 1.0;  // norm of each class mean
  double noise = 1.0;       // feature noise standard deviation
  double train_fraction = 0.9;

  void check() const;
};

/// Classes are assigned round-robin over a seeded permutation; class a has
/// mean separation * e_{a mod d}. Each pair (u, v) is linked with
/// probability p_intra or p_inter. The split is stratified by class.
AttributedGraph gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace certun
