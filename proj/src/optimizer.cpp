#include "certun/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "certun/error.hpp"

namespace certun {

namespace {

void check_finite(double f, const Vector& g, std::size_t iter) {
  if (!std::isfinite(f) || !all_finite(g))
    throw Error(ErrorCode::Divergence,
                "non-finite objective or gradient at iteration " + std::to_string(iter));
}

}  // namespace

MinimizeResult minimize(const ValueFn& value, const GradientFn& gradient, Vector x0,
                        const MinimizeOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::Config, "optimizer tolerance must be > 0");
  constexpr double eps = std::numeric_limits<double>::epsilon();

  MinimizeResult r;
  r.x = std::move(x0);
  r.value = value(r.x);
  Vector g = gradient(r.x);
  check_finite(r.value, g, 0);
  r.grad_norm = norm2(g);

  double step = 1.0;
  Vector x_new, g_new, s, y;
  while (r.grad_norm > options.tol && r.iterations < options.max_iters) {
    const double gg = r.grad_norm * r.grad_norm;
    bool accepted = false;
    double f_new = 0.0;
    double t = step;
    for (int trial = 0; trial < 80; ++trial, t *= options.shrink) {
      x_new = r.x;
      axpy(-t, g, x_new);
      f_new = value(x_new);
      if (!std::isfinite(f_new)) continue;
      if (f_new <= r.value - options.armijo_c * t * gg) {
        g_new = gradient(x_new);
        accepted = true;
        break;
      }
      if (f_new - r.value <= 8.0 * eps * (std::abs(r.value) + 1.0)) {
        g_new = gradient(x_new);
        if (norm2(g_new) < r.grad_norm) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
    ++r.iterations;
    check_finite(f_new, g_new, r.iterations);

    s = subtract(x_new, r.x);
    y = subtract(g_new, g);
    const double sy = dot(s, y);
    const double yy = dot(y, y);
    step = (sy > 0.0 && yy > 0.0) ? std::clamp(sy / yy, 1e-10, 1e10) : std::min(2.0 * t, 1e10);

    r.x.swap(x_new);
    g.swap(g_new);
    r.value = f_new;
    r.grad_norm = norm2(g);
  }
  r.converged = r.grad_norm <= options.tol;
  return r;
}

}  // namespace certun
