#include "certun/influence.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "certun/error.hpp"
#include "certun/rng.hpp"

namespace certun {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Direct: return "direct";
    case SolverKind::Cg: return "cg";
    case SolverKind::Stochastic: return "stochastic";
  }
  return "auto";
}

SolverKind parse_solver_kind(std::string_view text) {
  if (text == "auto") return SolverKind::Auto;
  if (text == "direct") return SolverKind::Direct;
  if (text == "cg") return SolverKind::Cg;
  if (text == "stochastic" || text == "lissa") return SolverKind::Stochastic;
  throw Error(ErrorCode::Config, "unknown solver '" + std::string(text) +
                                     "' (expected auto, direct, cg or stochastic)");
}

SolveResult solve_direct(const Matrix& a, std::span<const double> b) {
  const auto p = static_cast<Eigen::Index>(b.size());
  if (a.rows != b.size() || a.cols != b.size())
    throw Error(ErrorCode::Solver, "direct solve: matrix and right-hand side sizes differ");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> map(a.data.data(), p, p);
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), p);
  const Eigen::LLT<Eigen::MatrixXd> llt(map);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::Solver,
                "Hessian is not positive definite (reg_lambda too small or nonconvex model)");
  const Eigen::VectorXd x = llt.solve(rhs);
  SolveResult r;
  r.x.assign(x.data(), x.data() + p);
  r.residual_norm = (map * x - rhs).norm();
  r.iterations = 1;
  return r;
}

SolveResult solve_cg(const LinearOperator& a, std::span<const double> b, double tol,
                     std::size_t max_iters) {
  SolveResult r;
  const std::size_t p = b.size();
  r.x.assign(p, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return r;

  Vector res(b.begin(), b.end());
  Vector dir = res;
  double rho = dot(res, res);
  const double target = tol * bnorm;
  while (std::sqrt(rho) > target && r.iterations < max_iters) {
    const Vector q = a(dir);
    const double curvature = dot(dir, q);
    if (!(curvature > 0.0))
      throw Error(ErrorCode::Solver, "conjugate gradients met non-positive curvature");
    const double alpha = rho / curvature;
    axpy(alpha, dir, r.x);
    axpy(-alpha, q, res);
    const double rho_next = dot(res, res);
    const double beta = rho_next / rho;
    for (std::size_t i = 0; i < p; ++i) dir[i] = res[i] + beta * dir[i];
    rho = rho_next;
    ++r.iterations;
  }
  const Vector ax = a(r.x);
  r.residual_norm = distance(ax, b);
  r.converged = r.residual_norm <= target * 1.0001 || std::sqrt(rho) <= target;
  if (!r.converged)
    r.warning = "conjugate gradients stopped after " + std::to_string(r.iterations) +
                " iterations with residual " + std::to_string(r.residual_norm);
  return r;
}

SolveResult solve_stochastic(const LinearOperator& a, std::span<const double> b, std::size_t t,
                             double scale, double damp) {
  if (t < 1) throw Error(ErrorCode::Config, "stochastic estimation needs t >= 1");
  if (!(scale > 0.0)) throw Error(ErrorCode::Config, "stochastic estimation needs scale > 0");
  SolveResult r;
  const std::size_t p = b.size();
  Vector v(b.begin(), b.end());
  double prev_step = -1.0;
  int growth = 0;
  for (std::size_t j = 1; j <= t; ++j) {
    const Vector av = a(v);
    double step2 = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double next = b[i] + v[i] - (av[i] + damp * v[i]) / scale;
      step2 += (next - v[i]) * (next - v[i]);
      v[i] = next;
    }
    const double step = std::sqrt(step2);
    if (!std::isfinite(step))
      throw Error(ErrorCode::Solver, "stochastic estimation diverged (non-finite iterate)");
    growth = (prev_step >= 0.0 && step > prev_step) ? growth + 1 : 0;
    if (growth >= 10)
      throw Error(ErrorCode::Solver, "stochastic estimation diverged: scale " + std::to_string(scale) +
                                         " is too small for the operator");
    prev_step = step;
    r.iterations = j;
  }
  for (double& x : v) x /= scale;
  r.x = std::move(v);
  Vector ax = a(r.x);
  axpy(damp, r.x, ax);
  r.residual_norm = distance(ax, b);
  return r;
}

double estimate_top_eigenvalue(const LinearOperator& a, std::size_t dim, std::size_t iters) {
  if (dim == 0) return 0.0;
  Rng rng(0x5eedULL);
  Vector v(dim);
  for (double& x : v) x = rng.normal();
  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    const double n = norm2(v);
    if (n == 0.0) return 0.0;
    for (double& x : v) x /= n;
    Vector w = a(v);
    lambda = dot(v, w);
    v = std::move(w);
  }
  return lambda;
}

namespace {

// Training nodes of `obj` among `set`.
std::vector<NodeId> training_members(const Objective& obj, const NodeSet& set) {
  std::vector<NodeId> out;
  for (NodeId v : set)
    if (obj.graph().is_train(v)) out.push_back(v);
  return out;
}

}  // namespace

Vector grad_add_minus_sub(const Objective& before, const Objective& after,
                          std::span<const double> theta, const AffectedSets& sets) {
  const std::size_t p = before.num_params();
  Vector out(p, 0.0);
  std::ptrdiff_t count = 0;
  const auto add = sets.added();
  const auto sub = sets.subtracted();
  for (int i = 0; i < 4; ++i) {
    if (!sets.alphas[i]) continue;
    const auto plus = training_members(after, *add[i]);
    const auto minus = training_members(before, *sub[i]);
    if (!plus.empty()) axpy(1.0, after.gradient_sum(theta, plus), out);
    if (!minus.empty()) axpy(-1.0, before.gradient_sum(theta, minus), out);
    count += static_cast<std::ptrdiff_t>(plus.size()) - static_cast<std::ptrdiff_t>(minus.size());
  }
  axpy(static_cast<double>(count) * before.spec().reg_lambda, theta, out);
  if (!all_finite(out)) {
    for (int i = 0; i < 4; ++i)
      for (NodeId v : *sub[i])
        if (before.graph().is_train(v) && !all_finite(before.gradient_sum(theta, std::vector{v})))
          throw Error(ErrorCode::Numeric, "non-finite gradient at node " + std::to_string(v));
    throw Error(ErrorCode::Numeric, "non-finite correction gradient");
  }
  return out;
}

namespace {

std::size_t count_training(const AttributedGraph& g, const NodeSet& set) {
  std::size_t n = 0;
  for (NodeId v : set)
    if (g.is_train(v)) ++n;
  return n;
}

SolverKind resolve(SolverKind kind, std::size_t p, std::size_t ceiling) {
  if (kind != SolverKind::Auto) return kind;
  return p <= ceiling ? SolverKind::Direct : SolverKind::Cg;
}

}  // namespace

InfluenceResult unlearn(const TrainedModel& model, const AttributedGraph& g,
                        const UnlearnRequest& req, const SolverOptions& options,
                        bool force_serial) {
  require_valid(g, req);
  const int k = depth(model.spec);

  InfluenceResult result;
  result.theta_star = model.theta;
  result.theta_bar = model.theta;
  result.m_used = g.num_train();
  result.delta_theta_bar.assign(model.theta.size(), 0.0);
  result.grad_diff.assign(model.theta.size(), 0.0);
  result.delta_v_size = req.nodes.size();
  result.graph_after = g;
  result.solver = resolve(options.kind, model.theta.size(), options.direct_ceiling);
  if (req.empty()) return result;

  const RequestBatch batch =
      force_serial ? split_by_category(req) : split_for_serializability(g, req, k);

  AttributedGraph current = g;
  Vector theta = model.theta;
  Vector single_delta;
  for (std::size_t pass = 0; pass < batch.size(); ++pass) {
    const UnlearnRequest& part = batch[pass];
    PassDiagnostics diag;
    const AffectedSets sets = compute_affected_sets(current, part, k);
    DeletionResult deleted = apply_deletion(current, part);
    diag.warnings = deleted.warnings;

    const Objective before(current, model.spec);
    const Objective after(deleted.graph, model.spec);
    const Vector grad_diff = grad_add_minus_sub(before, after, theta, sets);
    if (pass == 0) result.grad_diff = grad_diff;

    diag.alphas = sets.alphas;
    for (int i = 0; i < 4; ++i) {
      if (!sets.alphas[i]) continue;
      diag.added_sizes[i] = sets.added()[i]->size();
      diag.subtracted_sizes[i] = sets.subtracted()[i]->size();
      diag.n_add += count_training(deleted.graph, *sets.added()[i]);
      diag.n_sub += count_training(current, *sets.subtracted()[i]);
    }
    diag.v_tilde_size = sets.v_tilde.size();
    diag.cross_category_overlap = sets.cross_category_overlap();
    diag.m_before = before.num_train();
    diag.m_after = after.num_train();
    diag.grad_diff_norm = norm2(grad_diff);
    if (diag.cross_category_overlap > 0)
      diag.warnings.push_back("request categories share " +
                              std::to_string(diag.cross_category_overlap) + " affected nodes");

    const auto hvp = [&](const Vector& v) { return before.hvp(theta, v); };
    const SolverKind kind = resolve(options.kind, theta.size(), options.direct_ceiling);
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult solved;
    switch (kind) {
      case SolverKind::Direct:
        solved = solve_direct(before.explicit_hessian(theta), grad_diff);
        break;
      case SolverKind::Cg:
        solved = solve_cg(hvp, grad_diff, options.cg_tol, options.cg_max_iters);
        break;
      case SolverKind::Stochastic: {
        double scale = options.stochastic_scale;
        if (!(scale > 0.0))
          scale = 1.1 * (estimate_top_eigenvalue(hvp, theta.size()) + options.damp);
        solved = solve_stochastic(hvp, grad_diff, options.stochastic_iters, scale, options.damp);
        break;
      }
      case SolverKind::Auto:
        break;
    }
    diag.solver_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    diag.solver = kind;
    diag.solver_iterations = solved.iterations;
    diag.solver_residual = solved.residual_norm;
    diag.solver_converged = solved.converged;
    if (!solved.warning.empty()) diag.warnings.push_back(solved.warning);

    Vector delta = scaled(solved.x, -1.0);
    diag.delta_norm = norm2(delta);
    const double m = static_cast<double>(before.num_train());
    if (m > 0.0)
      for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += delta[i] / m;
    if (batch.size() == 1) single_delta = std::move(delta);

    result.v_tilde = result.v_tilde.united(sets.v_tilde);
    for (const auto& w : diag.warnings) result.warnings.push_back(w);
    result.passes.push_back(std::move(diag));
    current = std::move(deleted.graph);
  }

  result.theta_bar = std::move(theta);
  result.solver = result.passes.front().solver;
  result.graph_after = std::move(current);
  if (batch.size() == 1) {
    result.delta_theta_bar = std::move(single_delta);
  } else {
    const double m = static_cast<double>(result.m_used);
    for (std::size_t i = 0; i < result.theta_bar.size(); ++i)
      result.delta_theta_bar[i] = m * (result.theta_bar[i] - result.theta_star[i]);
  }
  return result;
}

}  // namespace certun
