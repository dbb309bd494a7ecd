#pragma once

#include <cstdint>
#include <optional>

#include "certun/linalg.hpp"

namespace certun {

/// Constants of the convexity/Lipschitz/bounded-loss assumptions. Defaults
/// fit the regularized SGC objective.
struct AssumptionConstants {
  double lipschitz_L = 0.25;
  double convexity_lambda = 0.05;
  double loss_bound_C = 3.0;

  void check() const;
};

/// Bound on ||theta_tilde - theta_star||:
///   (L |dV| + sqrt(4 m lambda C |V~| + L^2 |dV|^2)) / (m lambda).
double bound_optimals(const AssumptionConstants& c, std::size_t m, std::size_t delta_v_size,
                      std::size_t v_tilde_size);

/// Bound on ||theta_tilde - theta_bar||: bound_optimals + ||delta_theta_bar|| / m.
double bound_approx(const AssumptionConstants& c, std::size_t m, std::size_t delta_v_size,
                    std::size_t v_tilde_size, double norm_delta_theta_bar);

/// Smallest admissible Gaussian noise scale (zeta/epsilon) sqrt(2 ln(1.25/delta)).
double calibrate_sigma(double zeta, double epsilon, double delta);

/// The epsilon at which calibrate_sigma(zeta, epsilon, delta) == sigma.
double epsilon_for_sigma(double zeta, double sigma, double delta);

struct CertificateReport {
  double optimal_distance_bound = 0.0;   // distance bound between the two optima
  double approx_distance_bound = 0.0;  // zeta: distance bound between retrained and approximated
  std::size_t delta_v_size = 0;
  std::size_t v_tilde_size = 0;
  std::size_t m = 0;
  double norm_delta_theta_bar = 0.0;
  double epsilon = 1.0;
  double delta = 0.01;
  double sigma = 0.0;
  std::uint64_t noise_seed = 0;
  AssumptionConstants constants;
  std::optional<double> actual_distance;
};

/// Fills the bounds and sigma for the given inputs.
CertificateReport make_certificate(const AssumptionConstants& c, std::size_t m,
                                   std::size_t delta_v_size, std::size_t v_tilde_size,
                                   double norm_delta_theta_bar, double epsilon, double delta,
                                   std::uint64_t noise_seed);

/// theta_bar + b with b ~ N(0, sigma^2 I) drawn from Rng(seed) in
/// coordinate order.
Vector add_gaussian_noise(std::span<const double> theta_bar, double sigma, std::uint64_t seed);

}  // namespace certun
