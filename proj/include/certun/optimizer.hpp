#pragma once

#include <cstddef>
#include <functional>

#include "certun/linalg.hpp"

namespace certun {

struct MinimizeOptions {
  double tol = 1e-9;             // stop when ||grad|| <= tol
  std::size_t max_iters = 20000;
  double armijo_c = 1e-4;
  double shrink = 0.5;
};

struct MinimizeResult {
  Vector x;
  double value = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

using ValueFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

/// Deterministic full-batch gradient descent with Armijo backtracking.
/// The trial step is the Barzilai-Borwein step from the previous iterate
/// (1.0 on the first iteration). Once the objective decrease drowns in
/// round-off, a trial step is accepted if it reduces the gradient norm.
/// Throws ErrorCode::Divergence on a non-finite objective or gradient.
MinimizeResult minimize(const ValueFn& value, const GradientFn& gradient, Vector x0,
                        const MinimizeOptions& options);

}  // namespace certun
