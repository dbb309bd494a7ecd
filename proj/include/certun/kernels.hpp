#pragma once

// Data-parallel inner loops. `serial` holds the plain reference loops used
// by tests; `parallel` holds the OpenMP versions used by the library.
//
// Parallel reductions accumulate fixed-size node blocks independently and
// combine the block partials in block order, so results are bitwise
// reproducible for any thread count. Row-wise kernels (propagation,
// per-node losses, dense products) give bitwise the same rows as serial.

#include <cstddef>
#include <cstdint>
#include <span>

#include "certun/graph.hpp"
#include "certun/linalg.hpp"

namespace certun::kernels {

/// Nodes per reduction block in the parallel kernels.
inline constexpr std::size_t kReductionBlock = 64;

struct CsrView {
  std::span<const std::size_t> offsets;
  std::span<const NodeId> columns;

  static CsrView of(const AttributedGraph& g) { return {g.offsets(), g.columns()}; }
  std::size_t num_rows() const { return offsets.size() - 1; }
};

// Linear-softmax model: logits of row v are z_v * W with W stored row-major
// (d x c) in `weights`.

namespace serial {

/// out = D^-1 (A + I) in; self term first, then neighbors in CSR order.
void propagate_step(CsrView adj, const Matrix& in, Matrix& out);
/// out = (D^-1 (A + I))^T in.
void propagate_transpose_step(CsrView adj, const Matrix& in, Matrix& out);
/// out = a * b with b given row-major (a.cols x b_cols).
void matmul(const Matrix& a, std::span<const double> b, std::size_t b_cols, Matrix& out);
/// out = a^T b, accumulated over rows of a and b.
void transpose_matmul(const Matrix& a, const Matrix& b, std::span<double> out);
/// Cross-entropy of each listed row.
void softmax_losses(const Matrix& z, std::span<const double> weights, std::size_t classes,
                    std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                    std::span<double> out);
/// out = sum over nodes of z_v^T (softmax(z_v W) - onehot(y_v)).
void softmax_gradient_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                          std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                          std::span<double> out);
/// out = sum over nodes of the cross-entropy Hessian of row v applied to `direction`.
void softmax_hvp_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                     std::span<const NodeId> nodes, std::span<const double> direction,
                     std::span<double> out);

}  // namespace serial

namespace parallel {

void propagate_step(CsrView adj, const Matrix& in, Matrix& out);
void propagate_transpose_step(CsrView adj, const Matrix& in, Matrix& out);
void matmul(const Matrix& a, std::span<const double> b, std::size_t b_cols, Matrix& out);
void transpose_matmul(const Matrix& a, const Matrix& b, std::span<double> out);
void softmax_losses(const Matrix& z, std::span<const double> weights, std::size_t classes,
                    std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                    std::span<double> out);
void softmax_gradient_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                          std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                          std::span<double> out);
void softmax_hvp_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                     std::span<const NodeId> nodes, std::span<const double> direction,
                     std::span<double> out);

}  // namespace parallel

/// Numerically stable softmax of `logits` written to `probs`; returns
/// log-sum-exp.
double softmax(std::span<const double> logits, std::span<double> probs);

}  // namespace certun::kernels
