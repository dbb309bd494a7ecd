#include <doctest.h>

#include <cmath>

#include "certun/certification.hpp"
#include "certun/error.hpp"

using namespace certun;

TEST_SUITE("certification") {
  TEST_CASE("bound on the optima distance") {
    const AssumptionConstants c;
    const double expected = (0.25 + std::sqrt(4 * 100 * 0.05 * 3.0 * 5 + 0.0625)) / 5.0;
    CHECK(bound_optimals(c, 100, 1, 5) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(std::abs(bound_optimals(c, 100, 1, 5) - 3.5145) <= 1e-4);
    CHECK(bound_optimals(c, 100, 0, 0) == 0.0);
    CHECK_THROWS_AS(bound_optimals(c, 0, 1, 1), Error);
  }

  TEST_CASE("bound on the approximation distance") {
    const AssumptionConstants c;
    CHECK(bound_approx(c, 100, 1, 5, 0.0) == bound_optimals(c, 100, 1, 5));
    CHECK(std::abs(bound_approx(c, 100, 1, 5, 2.0) - 3.5345) <= 1e-4);
    for (std::size_t dv = 0; dv < 5; ++dv)
      for (std::size_t vt = dv; vt < 20; vt += 3) {
        CHECK(bound_approx(c, 50, dv, vt, 0.7) >= bound_optimals(c, 50, dv, vt));
        CHECK(bound_optimals(c, 50, dv, vt + 1) >= bound_optimals(c, 50, dv, vt));
        CHECK(bound_optimals(c, 50, dv + 1, vt) >= bound_optimals(c, 50, dv, vt));
      }
  }

  TEST_CASE("sigma calibration") {
    CHECK(std::abs(calibrate_sigma(1.0, 1.0, 0.05) - 2.5373) <= 1e-4);
    CHECK(calibrate_sigma(0.0, 1.0, 0.05) == 0.0);
    CHECK(calibrate_sigma(2.0, 0.5, 0.01) == 2.0 * calibrate_sigma(1.0, 0.5, 0.01));
    CHECK_THROWS_AS(calibrate_sigma(1.0, 0.0, 0.05), Error);
    CHECK_THROWS_AS(calibrate_sigma(1.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(calibrate_sigma(-1.0, 1.0, 0.5), Error);
    for (double zeta : {0.01, 0.3, 4.0})
      for (double eps : {0.1, 1.0, 8.0}) {
        const double s = calibrate_sigma(zeta, eps, 0.01);
        const double rhs = (zeta / eps) * std::sqrt(2.0 * std::log(1.25 / 0.01));
        CHECK(std::abs(s - rhs) <= 4 * std::numeric_limits<double>::epsilon() * rhs);
      }
  }

  TEST_CASE("epsilon for a target sigma") {
    for (double zeta : {0.02, 1.0, 35.0}) {
      const double eps = epsilon_for_sigma(zeta, 0.01, 0.01);
      CHECK(calibrate_sigma(zeta, eps, 0.01) == doctest::Approx(0.01).epsilon(1e-14));
    }
    CHECK_THROWS_AS(epsilon_for_sigma(0.0, 0.01, 0.01), Error);
    CHECK_THROWS_AS(epsilon_for_sigma(1.0, 0.0, 0.01), Error);
  }

  TEST_CASE("certificate fields") {
    const auto rep = make_certificate({}, 100, 1, 5, 2.0, 1.0, 0.05, 42);
    CHECK(rep.optimal_distance_bound == bound_optimals({}, 100, 1, 5));
    CHECK(rep.approx_distance_bound == bound_approx({}, 100, 1, 5, 2.0));
    CHECK(rep.sigma == calibrate_sigma(rep.approx_distance_bound, 1.0, 0.05));
    CHECK(rep.noise_seed == 42);
    AssumptionConstants bad;
    bad.convexity_lambda = 0.0;
    CHECK_THROWS_AS(bad.check(), Error);
  }

  TEST_CASE("gaussian noise") {
    const Vector theta{1.0, -2.0, 0.5};
    CHECK(add_gaussian_noise(theta, 0.0, 3) == theta);
    CHECK(add_gaussian_noise(theta, 0.7, 3) == add_gaussian_noise(theta, 0.7, 3));
    CHECK(add_gaussian_noise(theta, 0.7, 3) != add_gaussian_noise(theta, 0.7, 4));

    // Per-coordinate variance over 10^4 independent draws at p = 50.
    const std::size_t p = 50, draws = 10000;
    const double sigma = 0.8;
    const Vector zero(p, 0.0);
    std::vector<double> sum(p, 0.0), sumsq(p, 0.0);
    for (std::size_t t = 0; t < draws; ++t) {
      const auto x = add_gaussian_noise(zero, sigma, 1000 + t);
      for (std::size_t i = 0; i < p; ++i) {
        sum[i] += x[i];
        sumsq[i] += x[i] * x[i];
      }
    }
    for (std::size_t i = 0; i < p; ++i) {
      const double mean = sum[i] / draws;
      const double var = (sumsq[i] - draws * mean * mean) / (draws - 1);
      CHECK(std::abs(var - sigma * sigma) <= 0.05 * sigma * sigma);
      CHECK(std::abs(mean) <= 5 * sigma / std::sqrt(static_cast<double>(draws)));
    }
  }
}
