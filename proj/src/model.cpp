#include "certun/model.hpp"

#include <algorithm>
#include <cmath>

#define EIGEN_DONT_PARALLELIZE
#include <Eigen/Core>

#include "certun/error.hpp"
#include "certun/kernels.hpp"
#include "certun/rng.hpp"

namespace certun {

namespace kp = kernels::parallel;

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Sgc ? "sgc" : "gcn2";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "sgc" || text == "SGC") return ModelKind::Sgc;
  if (text == "gcn2" || text == "GCN2" || text == "gcn") return ModelKind::Gcn2;
  throw Error(ErrorCode::Config, "unknown model kind '" + std::string(text) + "' (expected sgc or gcn2)");
}

std::size_t num_params(const ModelSpec& spec, std::size_t feature_dim, std::size_t num_classes) {
  if (spec.kind == ModelKind::Sgc) return feature_dim * num_classes;
  return feature_dim * spec.hidden + spec.hidden * num_classes;
}

int depth(const ModelSpec& spec) { return spec.kind == ModelKind::Sgc ? spec.k : 2; }

Matrix propagate(const AttributedGraph& g, int k) {
  if (k < 1) throw Error(ErrorCode::Config, "propagation depth k must be >= 1");
  const auto adj = kernels::CsrView::of(g);
  Matrix cur = g.features();
  Matrix next;
  for (int step = 0; step < k; ++step) {
    kp::propagate_step(adj, cur, next);
    cur.data.swap(next.data);
  }
  return cur;
}

Objective::Objective(const AttributedGraph& g, ModelSpec spec)
    : Objective(g, spec, g.train_nodes()) {}

Objective::Objective(const AttributedGraph& g, ModelSpec spec, NodeSet training)
    : graph_(&g), spec_(spec), training_(std::move(training)) {
  if (spec_.kind == ModelKind::Sgc && !(spec_.reg_lambda > 0.0))
    throw Error(ErrorCode::Config, "SGC requires reg_lambda > 0 for strong convexity");
  if (spec_.reg_lambda < 0.0) throw Error(ErrorCode::Config, "reg_lambda must be >= 0");
  if (spec_.kind == ModelKind::Gcn2) {
    if (spec_.hidden == 0) throw Error(ErrorCode::Config, "GCN2 hidden width must be >= 1");
    spec_.k = 2;
  }
  for (NodeId v : training_) {
    g.check_node(v);
    check_labeled(v);
  }
  num_params_ = certun::num_params(spec_, g.feature_dim(), g.num_classes());
  propagated_ = propagate(g, spec_.kind == ModelKind::Sgc ? spec_.k : 1);
}

void Objective::check_theta(std::span<const double> theta) const {
  if (theta.size() != num_params_)
    throw Error(ErrorCode::Numeric, "parameter vector has length " + std::to_string(theta.size()) +
                                        ", expected " + std::to_string(num_params_));
}

void Objective::check_labeled(NodeId v) const {
  const auto y = graph_->label(v);
  if (y < 0 || static_cast<std::size_t>(y) >= graph_->num_classes())
    throw Error(ErrorCode::InvalidNode, "node " + std::to_string(v) + " has no label");
}

Matrix Objective::logits(std::span<const double> theta) const {
  check_theta(theta);
  const auto c = graph_->num_classes();
  Matrix out;
  if (spec_.kind == ModelKind::Sgc) {
    kp::matmul(propagated_, theta, c, out);
    return out;
  }
  const auto d = graph_->feature_dim();
  const auto h = spec_.hidden;
  const auto w1 = theta.subspan(0, d * h);
  const auto w2 = theta.subspan(d * h, h * c);
  Matrix hidden, mixed;
  kp::matmul(propagated_, w1, h, hidden);
  for (double& x : hidden.data) x = std::max(x, 0.0);
  kp::propagate_step(kernels::CsrView::of(*graph_), hidden, mixed);
  kp::matmul(mixed, w2, c, out);
  return out;
}

double Objective::node_loss(std::span<const double> theta, NodeId v) const {
  graph_->check_node(v);
  check_labeled(v);
  const NodeId nodes[] = {v};
  return node_losses(theta, nodes)[0];
}

Vector Objective::node_losses(std::span<const double> theta, std::span<const NodeId> nodes) const {
  check_theta(theta);
  for (NodeId v : nodes) check_labeled(v);
  const auto c = graph_->num_classes();
  Vector out(nodes.size());
  if (spec_.kind == ModelKind::Sgc) {
    kp::softmax_losses(propagated_, theta, c, graph_->labels(), nodes, out);
    return out;
  }
  // Row v of the logits is the identity-weighted input to the same loss
  // kernel; passing an identity weight keeps the arithmetic in one place.
  const Matrix z = logits(theta);
  Vector identity(c * c, 0.0);
  for (std::size_t a = 0; a < c; ++a) identity[a * c + a] = 1.0;
  kp::softmax_losses(z, identity, c, graph_->labels(), nodes, out);
  return out;
}

Vector Objective::gradient_sum(std::span<const double> theta, std::span<const NodeId> nodes) const {
  check_theta(theta);
  for (NodeId v : nodes) check_labeled(v);
  if (spec_.kind == ModelKind::Gcn2) return gcn_gradient_sum(theta, nodes);
  Vector out(num_params_, 0.0);
  kp::softmax_gradient_sum(propagated_, theta, graph_->num_classes(), graph_->labels(), nodes, out);
  return out;
}

Vector Objective::gcn_gradient_sum(std::span<const double> theta, std::span<const NodeId> nodes) const {
  const auto d = graph_->feature_dim();
  const auto c = graph_->num_classes();
  const auto h = spec_.hidden;
  const auto adj = kernels::CsrView::of(*graph_);
  const auto w1 = theta.subspan(0, d * h);
  const auto w2 = theta.subspan(d * h, h * c);

  Matrix pre, act, mixed, z;
  kp::matmul(propagated_, w1, h, pre);
  act = pre;
  for (double& x : act.data) x = std::max(x, 0.0);
  kp::propagate_step(adj, act, mixed);
  kp::matmul(mixed, w2, c, z);

  Matrix dz(graph_->num_nodes(), c);
  for (NodeId v : nodes) {
    auto row = dz.row(v);
    kernels::softmax(z.row(v), row);
    row[static_cast<std::size_t>(graph_->label(v))] -= 1.0;
  }

  Vector out(num_params_, 0.0);
  std::span<double> dw1(out.data(), d * h);
  std::span<double> dw2(out.data() + d * h, h * c);
  kp::transpose_matmul(mixed, dz, dw2);

  Vector w2t(c * h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t a = 0; a < c; ++a) w2t[a * h + i] = w2[i * c + a];
  Matrix dmixed, dact;
  kp::matmul(dz, w2t, h, dmixed);
  kp::propagate_transpose_step(adj, dmixed, dact);
  for (std::size_t i = 0; i < dact.data.size(); ++i)
    if (pre.data[i] <= 0.0) dact.data[i] = 0.0;
  kp::transpose_matmul(propagated_, dact, dw1);
  return out;
}

double Objective::loss(std::span<const double> theta) const {
  check_theta(theta);
  double data_term = 0.0;
  if (!training_.empty()) {
    const Vector losses = node_losses(theta, training_.ids());
    for (double l : losses) data_term += l;
    data_term /= static_cast<double>(training_.size());
  }
  return data_term + 0.5 * spec_.reg_lambda * dot(theta, theta);
}

Vector Objective::gradient(std::span<const double> theta) const {
  Vector g = gradient_sum(theta, training_.ids());
  const double inv_m = training_.empty() ? 0.0 : 1.0 / static_cast<double>(training_.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = g[i] * inv_m + spec_.reg_lambda * theta[i];
  return g;
}

Vector Objective::hvp(std::span<const double> theta, std::span<const double> direction) const {
  check_theta(theta);
  if (direction.size() != num_params_)
    throw Error(ErrorCode::Numeric, "hvp direction has wrong length");
  if (spec_.kind == ModelKind::Sgc) {
    Vector out(num_params_, 0.0);
    kp::softmax_hvp_sum(propagated_, theta, graph_->num_classes(), training_.ids(), direction, out);
    const double inv_m = training_.empty() ? 0.0 : 1.0 / static_cast<double>(training_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = out[i] * inv_m + spec_.reg_lambda * direction[i];
    return out;
  }
  const double dn = norm2(direction);
  if (dn == 0.0) return Vector(num_params_, 0.0);
  const double eps = 1e-4 * (1.0 + norm2(theta)) / std::max(dn, 1e-12);
  Vector plus(theta.begin(), theta.end()), minus(theta.begin(), theta.end());
  axpy(eps, direction, plus);
  axpy(-eps, direction, minus);
  const Vector gp = gradient(plus);
  const Vector gm = gradient(minus);
  Vector out(num_params_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (gp[i] - gm[i]) / (2.0 * eps);
  return out;
}

Matrix Objective::explicit_hessian(std::span<const double> theta) const {
  check_theta(theta);
  if (spec_.kind == ModelKind::Sgc) return sgc_hessian(theta);
  const auto p = num_params_;
  Matrix hess(p, p);
  Vector e(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    e[j] = 1.0;
    const Vector col = hvp(theta, e);
    for (std::size_t i = 0; i < p; ++i) hess(i, j) = col[i];
    e[j] = 0.0;
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const double avg = 0.5 * (hess(i, j) + hess(j, i));
      hess(i, j) = avg;
      hess(j, i) = avg;
    }
  return hess;
}

// Block (a, b) of the SGC Hessian, over parameter pairs (j*c + a, l*c + b), is
//   (1/m) sum_v z_vj z_vl p_va (delta_ab - p_vb)  +  reg_lambda * delta_jl delta_ab.
Matrix Objective::sgc_hessian(std::span<const double> theta) const {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto d = graph_->feature_dim();
  const auto c = graph_->num_classes();
  const auto m = training_.size();
  const auto p = num_params_;
  Matrix hess(p, p);
  if (m > 0) {
    RowMajor z(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    RowMajor probs(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c));
    Vector logits(c), pr(c);
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = propagated_.row(training_.ids()[i]);
      std::copy(row.begin(), row.end(), z.row(static_cast<Eigen::Index>(i)).data());
      std::fill(logits.begin(), logits.end(), 0.0);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t a = 0; a < c; ++a) logits[a] += row[j] * theta[j * c + a];
      kernels::softmax(logits, pr);
      std::copy(pr.begin(), pr.end(), probs.row(static_cast<Eigen::Index>(i)).data());
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    Eigen::VectorXd w(static_cast<Eigen::Index>(m));
    for (std::size_t a = 0; a < c; ++a)
      for (std::size_t b = a; b < c; ++b) {
        const auto ea = static_cast<Eigen::Index>(a), eb = static_cast<Eigen::Index>(b);
        w = probs.col(ea).cwiseProduct((a == b ? 1.0 : 0.0) * Eigen::VectorXd::Ones(w.size()) - probs.col(eb));
        const RowMajor block = inv_m * (z.transpose() * w.asDiagonal() * z);
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t l = 0; l < d; ++l) {
            const double h = block(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
            hess(j * c + a, l * c + b) = h;
            hess(l * c + b, j * c + a) = h;
          }
      }
  }
  for (std::size_t i = 0; i < p; ++i) hess(i, i) += spec_.reg_lambda;
  return hess;
}

Matrix Objective::probabilities(std::span<const double> theta) const {
  Matrix z = logits(theta);
  Vector probs(z.cols);
  for (std::size_t v = 0; v < z.rows; ++v) {
    kernels::softmax(z.row(v), probs);
    std::copy(probs.begin(), probs.end(), z.row(v).begin());
  }
  return z;
}

std::vector<std::int32_t> Objective::predict(std::span<const double> theta) const {
  const Matrix z = logits(theta);
  std::vector<std::int32_t> out(z.rows);
  for (std::size_t v = 0; v < z.rows; ++v) {
    const auto row = z.row(v);
    out[v] = static_cast<std::int32_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

Vector initial_parameters(const ModelSpec& spec, std::size_t feature_dim, std::size_t num_classes,
                          std::uint64_t seed) {
  Vector theta(num_params(spec, feature_dim, num_classes), 0.0);
  if (spec.kind == ModelKind::Sgc) return theta;
  Rng rng(seed);
  const std::size_t first = feature_dim * spec.hidden;
  const double s1 = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(feature_dim, 1)));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(spec.hidden));
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = rng.normal(0.0, i < first ? s1 : s2);
  return theta;
}

TrainedModel train(const Objective& objective, Vector init, const TrainOptions& options,
                   std::uint64_t seed) {
  if (init.empty()) init.assign(objective.num_params(), 0.0);
  MinimizeOptions mo;
  mo.tol = options.tol;
  mo.max_iters = options.max_iters;
  const auto result = minimize([&](const Vector& t) { return objective.loss(t); },
                               [&](const Vector& t) { return objective.gradient(t); },
                               std::move(init), mo);
  TrainedModel model;
  model.spec = objective.spec();
  model.theta = result.x;
  model.seed = seed;
  model.stats = {result.iterations, result.grad_norm, result.value, result.converged};
  return model;
}

}  // namespace certun
