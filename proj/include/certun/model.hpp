#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "certun/graph.hpp"
#include "certun/linalg.hpp"
#include "certun/optimizer.hpp"

namespace certun {

enum class ModelKind : std::uint32_t {
  Sgc = 0,   // k propagation steps, then multinomial logistic regression
  Gcn2 = 1,  // two graph-convolution layers with a ReLU in between
};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ModelSpec {
  ModelKind kind = ModelKind::Sgc;
  int k = 2;                 // propagation depth (always 2 for Gcn2)
  double reg_lambda = 0.05;  // L2 coefficient
  std::size_t hidden = 16;   // Gcn2 hidden width

  bool operator==(const ModelSpec&) const = default;
};

/// Parameter count: d*c for SGC, d*h + h*c for GCN2.
std::size_t num_params(const ModelSpec& spec, std::size_t feature_dim, std::size_t num_classes);

/// Receptive-field depth of the model.
int depth(const ModelSpec& spec);

struct TrainStats {
  std::size_t iterations = 0;
  double grad_norm = 0.0;
  double loss = 0.0;
  bool converged = false;
};

struct TrainedModel {
  ModelSpec spec;
  Vector theta;
  std::uint64_t seed = 0;
  TrainStats stats;
};

/// S^k X with S = D^-1 (A + I), self-loops added to every node. Isolated
/// nodes keep their own features.
Matrix propagate(const AttributedGraph& g, int k);

/// Training objective of one model on one graph:
///   (1/m) sum over training nodes of cross-entropy + (reg_lambda/2) ||theta||^2.
///
/// Holds a reference to the graph; the graph must outlive the objective.
/// Per-node losses and gradient sums exclude the regularizer.
class Objective {
 public:
  Objective(const AttributedGraph& g, ModelSpec spec);
  Objective(const AttributedGraph& g, ModelSpec spec, NodeSet training);

  const AttributedGraph& graph() const { return *graph_; }
  const ModelSpec& spec() const { return spec_; }
  const NodeSet& training_nodes() const { return training_; }
  std::size_t num_params() const { return num_params_; }
  std::size_t num_train() const { return training_.size(); }

  double loss(std::span<const double> theta) const;
  Vector gradient(std::span<const double> theta) const;
  /// SGC: exact. GCN2: central difference of gradients.
  Vector hvp(std::span<const double> theta, std::span<const double> direction) const;
  /// Dense Hessian of loss(). SGC: closed form from class-pair weighted
  /// Gram matrices. GCN2: columns of hvp(), symmetrized.
  Matrix explicit_hessian(std::span<const double> theta) const;

  double node_loss(std::span<const double> theta, NodeId v) const;
  Vector node_losses(std::span<const double> theta, std::span<const NodeId> nodes) const;
  /// Sum over `nodes` of per-node loss gradients (no regularizer).
  Vector gradient_sum(std::span<const double> theta, std::span<const NodeId> nodes) const;

  /// Row-wise softmax outputs for every node (n x c).
  Matrix probabilities(std::span<const double> theta) const;
  std::vector<std::int32_t> predict(std::span<const double> theta) const;

  /// The propagated input: S^k X for SGC, S X for GCN2.
  const Matrix& propagated() const { return propagated_; }

 private:
  Matrix logits(std::span<const double> theta) const;
  Matrix sgc_hessian(std::span<const double> theta) const;
  Vector gcn_gradient_sum(std::span<const double> theta, std::span<const NodeId> nodes) const;
  void check_theta(std::span<const double> theta) const;
  void check_labeled(NodeId v) const;

  const AttributedGraph* graph_;
  ModelSpec spec_;
  NodeSet training_;
  std::size_t num_params_ = 0;
  Matrix propagated_;
};

/// Initial parameters: zeros for SGC, seeded N(0, 1/fan_in) for GCN2.
Vector initial_parameters(const ModelSpec& spec, std::size_t feature_dim, std::size_t num_classes,
                          std::uint64_t seed);

struct TrainOptions {
  double tol = 1e-9;
  std::size_t max_iters = 20000;
};

/// Deterministic full-batch gradient descent from `init`.
TrainedModel train(const Objective& objective, Vector init, const TrainOptions& options,
                   std::uint64_t seed = 0);

}  // namespace certun
