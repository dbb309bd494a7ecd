#pragma once

#include "certun/certification.hpp"
#include "certun/model.hpp"
#include "certun/request.hpp"

namespace certun {

/// Retrains on the graph with the request applied. Warm-starts from the
/// model's parameters unless `cold_start`, in which case it starts from
/// initial_parameters(spec, ..., model.seed).
TrainedModel retrain(const TrainedModel& model, const AttributedGraph& g, const UnlearnRequest& req,
                     const TrainOptions& options, bool cold_start = false);

/// The interpolating objective
///   before.loss(theta) + xi * (L_add(theta) - L_sub(theta)),
/// where every node in L_add / L_sub carries its per-node share
/// (reg_lambda / 2) ||theta||^2 of the L2 term. At xi = 1/m its minimizer
/// coincides with the retrained optimum.
class XiObjective {
 public:
  XiObjective(const Objective& before, const Objective& after, const AffectedSets& sets, double xi);

  double value(std::span<const double> theta) const;
  Vector gradient(std::span<const double> theta) const;

  /// Net number of regularized loss terms added (n_add - n_sub).
  std::ptrdiff_t net_terms() const { return n_add_ - n_sub_; }

 private:
  const Objective* before_;
  const Objective* after_;
  const AffectedSets* sets_;
  double xi_;
  std::array<std::vector<NodeId>, 4> add_, sub_;
  std::ptrdiff_t n_add_ = 0;
  std::ptrdiff_t n_sub_ = 0;
};

/// Minimizes XiObjective from `init`.
MinimizeResult argmin_xi(const XiObjective& objective, Vector init, const TrainOptions& options);

struct ParameterDistances {
  double star_tilde = 0.0;  // ||theta_star - theta_tilde||
  double tilde_bar = 0.0;   // ||theta_tilde - theta_bar||
  double star_bar = 0.0;    // ||theta_star - theta_bar||
};

ParameterDistances parameter_distances(std::span<const double> theta_star,
                                       std::span<const double> theta_tilde,
                                       std::span<const double> theta_bar);

/// Empirical surrogates for the assumption constants, measured on one run.
struct EmpiricalConstants {
  double max_loss = 0.0;           // max regularized per-node loss at both optima
  double max_grad_norm = 0.0;      // max regularized per-node gradient norm on the segment
  double min_curvature = 0.0;      // reg_lambda (SGC lower bound on Hessian eigenvalues)
  std::size_t segment_points = 0;

  AssumptionConstants as_constants() const { return {max_grad_norm, min_curvature, max_loss}; }
  /// Whether the measured values stay within `assumed`.
  bool within(const AssumptionConstants& assumed) const;
};

/// Measures per-node losses at theta_star (on `before`) and theta_tilde (on
/// `after`), and per-node gradient norms at `points` evenly spaced points of
/// the segment between them (each on its own graph's training nodes).
EmpiricalConstants measure_constants(const Objective& before, const Objective& after,
                                     std::span<const double> theta_star,
                                     std::span<const double> theta_tilde, std::size_t points = 5);

}  // namespace certun
