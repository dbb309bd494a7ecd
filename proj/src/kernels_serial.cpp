#include <algorithm>
#include <cmath>
#include <vector>

#include "certun/kernels.hpp"

namespace certun::kernels {

double softmax(std::span<const double> logits, std::span<double> probs) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    probs[a] = std::exp(logits[a] - mx);
    sum += probs[a];
  }
  for (double& p : probs) p /= sum;
  return mx + std::log(sum);
}

namespace serial {

void propagate_step(CsrView adj, const Matrix& in, Matrix& out) {
  out = Matrix(in.rows, in.cols);
  for (std::size_t v = 0; v < adj.num_rows(); ++v) {
    auto dst = out.row(v);
    const auto self = in.row(v);
    std::copy(self.begin(), self.end(), dst.begin());
    for (std::size_t e = adj.offsets[v]; e < adj.offsets[v + 1]; ++e) {
      const auto src = in.row(adj.columns[e]);
      for (std::size_t j = 0; j < in.cols; ++j) dst[j] += src[j];
    }
    const double deg = static_cast<double>(adj.offsets[v + 1] - adj.offsets[v] + 1);
    for (double& x : dst) x /= deg;
  }
}

void propagate_transpose_step(CsrView adj, const Matrix& in, Matrix& out) {
  out = Matrix(in.rows, in.cols);
  const auto inv = [&](std::size_t v) {
    return 1.0 / static_cast<double>(adj.offsets[v + 1] - adj.offsets[v] + 1);
  };
  for (std::size_t u = 0; u < adj.num_rows(); ++u) {
    auto dst = out.row(u);
    const auto self = in.row(u);
    const double wu = inv(u);
    for (std::size_t j = 0; j < in.cols; ++j) dst[j] = wu * self[j];
    for (std::size_t e = adj.offsets[u]; e < adj.offsets[u + 1]; ++e) {
      const NodeId v = adj.columns[e];
      const double wv = inv(v);
      const auto src = in.row(v);
      for (std::size_t j = 0; j < in.cols; ++j) dst[j] += wv * src[j];
    }
  }
}

void matmul(const Matrix& a, std::span<const double> b, std::size_t b_cols, Matrix& out) {
  out = Matrix(a.rows, b_cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b_cols; ++j) out(i, j) += aik * b[k * b_cols + j];
    }
}

void transpose_matmul(const Matrix& a, const Matrix& b, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols; ++j) out[k * b.cols + j] += aik * b(i, j);
    }
}

void softmax_losses(const Matrix& z, std::span<const double> weights, std::size_t classes,
                    std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                    std::span<double> out) {
  std::vector<double> logits(classes), probs(classes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId v = nodes[i];
    std::fill(logits.begin(), logits.end(), 0.0);
    for (std::size_t j = 0; j < z.cols; ++j)
      for (std::size_t a = 0; a < classes; ++a) logits[a] += z(v, j) * weights[j * classes + a];
    const double lse = softmax(logits, probs);
    out[i] = lse - logits[static_cast<std::size_t>(labels[v])];
  }
}

void softmax_gradient_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                          std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                          std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> logits(classes), probs(classes);
  for (NodeId v : nodes) {
    std::fill(logits.begin(), logits.end(), 0.0);
    for (std::size_t j = 0; j < z.cols; ++j)
      for (std::size_t a = 0; a < classes; ++a) logits[a] += z(v, j) * weights[j * classes + a];
    softmax(logits, probs);
    probs[static_cast<std::size_t>(labels[v])] -= 1.0;
    for (std::size_t j = 0; j < z.cols; ++j)
      for (std::size_t a = 0; a < classes; ++a) out[j * classes + a] += z(v, j) * probs[a];
  }
}

void softmax_hvp_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                     std::span<const NodeId> nodes, std::span<const double> direction,
                     std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> logits(classes), probs(classes), dlogits(classes);
  for (NodeId v : nodes) {
    std::fill(logits.begin(), logits.end(), 0.0);
    std::fill(dlogits.begin(), dlogits.end(), 0.0);
    for (std::size_t j = 0; j < z.cols; ++j)
      for (std::size_t a = 0; a < classes; ++a) {
        logits[a] += z(v, j) * weights[j * classes + a];
        dlogits[a] += z(v, j) * direction[j * classes + a];
      }
    softmax(logits, probs);
    double pa = 0.0;
    for (std::size_t a = 0; a < classes; ++a) pa += probs[a] * dlogits[a];
    for (std::size_t a = 0; a < classes; ++a) dlogits[a] = probs[a] * (dlogits[a] - pa);
    for (std::size_t j = 0; j < z.cols; ++j)
      for (std::size_t a = 0; a < classes; ++a) out[j * classes + a] += z(v, j) * dlogits[a];
  }
}

}  // namespace serial
}  // namespace certun::kernels
