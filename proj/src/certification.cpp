#include "certun/certification.hpp"

#include <cmath>

#include "certun/error.hpp"
#include "certun/rng.hpp"

namespace certun {

void AssumptionConstants::check() const {
  if (!(lipschitz_L > 0.0) || !(convexity_lambda > 0.0) || !(loss_bound_C > 0.0))
    throw Error(ErrorCode::Config, "assumption constants L, lambda and C must be > 0");
}

double bound_optimals(const AssumptionConstants& c, std::size_t m, std::size_t delta_v_size,
                      std::size_t v_tilde_size) {
  c.check();
  if (m == 0) throw Error(ErrorCode::Config, "distance bound needs m > 0 training nodes");
  const double md = static_cast<double>(m);
  const double dv = static_cast<double>(delta_v_size);
  const double vt = static_cast<double>(v_tilde_size);
  const double L = c.lipschitz_L;
  const double lam = c.convexity_lambda;
  return (L * dv + std::sqrt(4.0 * md * lam * c.loss_bound_C * vt + L * L * dv * dv)) / (md * lam);
}

double bound_approx(const AssumptionConstants& c, std::size_t m, std::size_t delta_v_size,
                    std::size_t v_tilde_size, double norm_delta_theta_bar) {
  if (!(norm_delta_theta_bar >= 0.0))
    throw Error(ErrorCode::Config, "||delta_theta_bar|| must be >= 0");
  const double md = static_cast<double>(m);
  return bound_optimals(c, m, delta_v_size, v_tilde_size) +
         norm_delta_theta_bar / md;
}

double calibrate_sigma(double zeta, double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::Config, "epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::Config, "delta must lie in (0, 1)");
  if (!(zeta >= 0.0)) throw Error(ErrorCode::Config, "zeta must be >= 0");
  return zeta / epsilon * std::sqrt(2.0 * std::log(1.25 / delta));
}

double epsilon_for_sigma(double zeta, double sigma, double delta) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::Config, "sigma must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::Config, "delta must lie in (0, 1)");
  if (!(zeta > 0.0)) throw Error(ErrorCode::Config, "zeta must be > 0");
  return zeta / sigma * std::sqrt(2.0 * std::log(1.25 / delta));
}

CertificateReport make_certificate(const AssumptionConstants& c, std::size_t m,
                                   std::size_t delta_v_size, std::size_t v_tilde_size,
                                   double norm_delta_theta_bar, double epsilon, double delta,
                                   std::uint64_t noise_seed) {
  CertificateReport r;
  r.constants = c;
  r.m = m;
  r.delta_v_size = delta_v_size;
  r.v_tilde_size = v_tilde_size;
  r.norm_delta_theta_bar = norm_delta_theta_bar;
  r.optimal_distance_bound = bound_optimals(c, m, delta_v_size, v_tilde_size);
  r.approx_distance_bound = bound_approx(c, m, delta_v_size, v_tilde_size, norm_delta_theta_bar);
  r.epsilon = epsilon;
  r.delta = delta;
  r.sigma = calibrate_sigma(r.approx_distance_bound, epsilon, delta);
  r.noise_seed = noise_seed;
  return r;
}

Vector add_gaussian_noise(std::span<const double> theta_bar, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::Config, "sigma must be >= 0");
  Vector out(theta_bar.begin(), theta_bar.end());
  if (sigma == 0.0) return out;
  Rng rng(seed);
  for (double& x : out) x += sigma * rng.normal();
  return out;
}

}  // namespace certun
