#include "certun/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "certun/error.hpp"

namespace certun {

TrainedModel retrain(const TrainedModel& model, const AttributedGraph& g, const UnlearnRequest& req,
                     const TrainOptions& options, bool cold_start) {
  require_valid(g, req);
  const AttributedGraph after = apply_deletion(g, req).graph;
  const Objective objective(after, model.spec);
  Vector init = cold_start
                    ? initial_parameters(model.spec, g.feature_dim(), g.num_classes(), model.seed)
                    : model.theta;
  return train(objective, std::move(init), options, model.seed);
}

XiObjective::XiObjective(const Objective& before, const Objective& after, const AffectedSets& sets,
                         double xi)
    : before_(&before), after_(&after), sets_(&sets), xi_(xi) {
  for (int i = 0; i < 4; ++i) {
    if (!sets.alphas[i]) continue;
    for (NodeId v : *sets.added()[i])
      if (after.graph().is_train(v)) add_[i].push_back(v);
    for (NodeId v : *sets.subtracted()[i])
      if (before.graph().is_train(v)) sub_[i].push_back(v);
    n_add_ += static_cast<std::ptrdiff_t>(add_[i].size());
    n_sub_ += static_cast<std::ptrdiff_t>(sub_[i].size());
  }
}

double XiObjective::value(std::span<const double> theta) const {
  double correction = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (double l : after_->node_losses(theta, add_[i])) correction += l;
    for (double l : before_->node_losses(theta, sub_[i])) correction -= l;
  }
  correction += static_cast<double>(net_terms()) * 0.5 * before_->spec().reg_lambda * dot(theta, theta);
  return before_->loss(theta) + xi_ * correction;
}

Vector XiObjective::gradient(std::span<const double> theta) const {
  Vector g = before_->gradient(theta);
  Vector correction(g.size(), 0.0);
  for (int i = 0; i < 4; ++i) {
    if (!add_[i].empty()) axpy(1.0, after_->gradient_sum(theta, add_[i]), correction);
    if (!sub_[i].empty()) axpy(-1.0, before_->gradient_sum(theta, sub_[i]), correction);
  }
  axpy(static_cast<double>(net_terms()) * before_->spec().reg_lambda, theta, correction);
  axpy(xi_, correction, g);
  return g;
}

MinimizeResult argmin_xi(const XiObjective& objective, Vector init, const TrainOptions& options) {
  MinimizeOptions mo;
  mo.tol = options.tol;
  mo.max_iters = options.max_iters;
  return minimize([&](const Vector& t) { return objective.value(t); },
                  [&](const Vector& t) { return objective.gradient(t); }, std::move(init), mo);
}

ParameterDistances parameter_distances(std::span<const double> theta_star,
                                       std::span<const double> theta_tilde,
                                       std::span<const double> theta_bar) {
  if (theta_star.size() != theta_tilde.size() || theta_star.size() != theta_bar.size())
    throw Error(ErrorCode::Numeric, "parameter vectors differ in length");
  return {distance(theta_star, theta_tilde), distance(theta_tilde, theta_bar),
          distance(theta_star, theta_bar)};
}

bool EmpiricalConstants::within(const AssumptionConstants& assumed) const {
  return max_loss <= assumed.loss_bound_C && max_grad_norm <= assumed.lipschitz_L &&
         min_curvature >= assumed.convexity_lambda;
}

EmpiricalConstants measure_constants(const Objective& before, const Objective& after,
                                     std::span<const double> theta_star,
                                     std::span<const double> theta_tilde, std::size_t points) {
  EmpiricalConstants out;
  const double lam = before.spec().reg_lambda;
  out.min_curvature = lam;
  out.segment_points = std::max<std::size_t>(points, 2);

  const auto max_loss = [&](const Objective& obj, std::span<const double> theta) {
    double worst = 0.0;
    const double reg = 0.5 * lam * dot(theta, theta);
    for (double l : obj.node_losses(theta, obj.training_nodes().ids()))
      worst = std::max(worst, std::abs(l + reg));
    return worst;
  };
  out.max_loss = std::max(max_loss(before, theta_star), max_loss(after, theta_tilde));

  Vector theta(theta_star.size());
  for (std::size_t s = 0; s < out.segment_points; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(out.segment_points - 1);
    for (std::size_t i = 0; i < theta.size(); ++i)
      theta[i] = (1.0 - t) * theta_star[i] + t * theta_tilde[i];
    for (const Objective* obj : {&before, &after})
      for (NodeId v : obj->training_nodes()) {
        Vector g = obj->gradient_sum(theta, std::vector{v});
        axpy(lam, theta, g);
        out.max_grad_norm = std::max(out.max_grad_norm, norm2(g));
      }
  }
  return out;
}

}  // namespace certun
