#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "certun/linalg.hpp"
#include "certun/model.hpp"
#include "certun/request.hpp"

namespace certun {

enum class SolverKind { Auto, Direct, Cg, Stochastic };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view text);

struct SolverOptions {
  SolverKind kind = SolverKind::Auto;
  std::size_t direct_ceiling = 4096;  // Auto picks Direct up to this many parameters
  double cg_tol = 1e-8;
  std::size_t cg_max_iters = 10000;
  std::size_t stochastic_iters = 1000;
  double stochastic_scale = 0.0;  // <= 0: 1.1 x power-iteration estimate of the top eigenvalue
  double damp = 0.01;
};

using LinearOperator = std::function<Vector(const Vector&)>;

struct SolveResult {
  Vector x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;  // ||A x - b||
  bool converged = true;
  std::string warning;
};

/// Dense symmetric positive-definite solve (Cholesky). Throws
/// ErrorCode::Solver when the factorization fails.
SolveResult solve_direct(const Matrix& a, std::span<const double> b);

/// Conjugate gradients from x = 0 until ||r|| <= tol * ||b||. Running out of
/// iterations is reported through `converged` and `warning`, not thrown.
SolveResult solve_cg(const LinearOperator& a, std::span<const double> b, double tol,
                     std::size_t max_iters);

/// Truncated Neumann series for (A + damp I)^-1 b:
///   v_0 = b,  v_j = b + (I - (A + damp I)/scale) v_{j-1},  x = v_t / scale.
/// Throws ErrorCode::Solver when the series increments grow for 10
/// consecutive steps (scale too small) or turn non-finite.
SolveResult solve_stochastic(const LinearOperator& a, std::span<const double> b, std::size_t t,
                             double scale, double damp);

/// Power-iteration estimate of the largest eigenvalue of a symmetric
/// positive semi-definite operator.
double estimate_top_eigenvalue(const LinearOperator& a, std::size_t dim, std::size_t iters = 50);

/// The correction gradient  grad L_add - grad L_sub  at theta.
///
/// `before` is the objective on the original graph, `after` on the graph
/// with the request applied. Category i contributes the loss gradients of
/// its un-tilded set on `after` minus those of its tilded set on `before`
/// when alpha_i is set; only nodes that are training nodes of the
/// respective graph carry a loss term. Every contributing node also carries
/// its 1/m share of the L2 term, so the regularizer enters as
/// (n_add - n_sub) * reg_lambda * theta.
Vector grad_add_minus_sub(const Objective& before, const Objective& after,
                          std::span<const double> theta, const AffectedSets& sets);

struct PassDiagnostics {
  std::array<bool, 4> alphas{};
  std::array<std::size_t, 4> added_sizes{};
  std::array<std::size_t, 4> subtracted_sizes{};
  std::size_t v_tilde_size = 0;
  std::size_t cross_category_overlap = 0;
  std::size_t m_before = 0;
  std::size_t m_after = 0;
  std::size_t n_add = 0;
  std::size_t n_sub = 0;
  double grad_diff_norm = 0.0;
  double delta_norm = 0.0;
  SolverKind solver = SolverKind::Direct;
  std::size_t solver_iterations = 0;
  double solver_residual = 0.0;
  bool solver_converged = true;
  double solver_seconds = 0.0;
  std::vector<std::string> warnings;
};

struct InfluenceResult {
  Vector theta_star;
  Vector theta_bar;
  /// m_used * (theta_bar - theta_star); exactly the single-pass correction
  /// when one pass was needed.
  Vector delta_theta_bar;
  /// Correction gradient of the first pass.
  Vector grad_diff;
  std::size_t m_used = 0;
  SolverKind solver = SolverKind::Direct;
  std::vector<PassDiagnostics> passes;
  /// Union of the bound-relevant node sets over all passes.
  NodeSet v_tilde;
  std::size_t delta_v_size = 0;
  AttributedGraph graph_after;
  std::vector<std::string> warnings;
};

/// Approximates the parameters retraining would reach after the request.
///
/// The request is split into serially applied passes when its categories
/// overlap (always, when `force_serial`). Each pass solves
/// H * delta = -(grad L_add - grad L_sub) with the Hessian of the current
/// objective at the current parameters and moves theta by delta / m.
InfluenceResult unlearn(const TrainedModel& model, const AttributedGraph& g,
                        const UnlearnRequest& req, const SolverOptions& options,
                        bool force_serial = false);

}  // namespace certun
