#include <algorithm>
#include <vector>

#include "certun/kernels.hpp"

namespace certun::kernels::parallel {

namespace {

std::size_t num_blocks(std::size_t count) { return (count + kReductionBlock - 1) / kReductionBlock; }

// Runs body(begin, end, partial) for every block of `nodes` in parallel and
// adds the partials into `out` in block order.
template <class Body>
void blocked_reduce(std::span<const NodeId> nodes, std::span<double> out, Body&& body) {
  const std::size_t blocks = num_blocks(nodes.size());
  const std::size_t width = out.size();
  std::vector<double> partials(blocks * width, 0.0);
  const auto nblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(begin + kReductionBlock, nodes.size());
    body(nodes.subspan(begin, end - begin),
         std::span<double>(partials.data() + static_cast<std::size_t>(b) * width, width));
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t i = 0; i < width; ++i) out[i] += partials[b * width + i];
}

void row_logits(const Matrix& z, NodeId v, std::span<const double> weights, std::size_t classes,
                std::span<double> logits) {
  std::fill(logits.begin(), logits.end(), 0.0);
  for (std::size_t j = 0; j < z.cols; ++j) {
    const double zj = z(v, j);
    for (std::size_t a = 0; a < classes; ++a) logits[a] += zj * weights[j * classes + a];
  }
}

}  // namespace

void propagate_step(CsrView adj, const Matrix& in, Matrix& out) {
  out = Matrix(in.rows, in.cols);
  const auto rows = static_cast<std::ptrdiff_t>(adj.num_rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t vi = 0; vi < rows; ++vi) {
    const auto v = static_cast<std::size_t>(vi);
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
  const auto rows = static_cast<std::ptrdiff_t>(adj.num_rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ui = 0; ui < rows; ++ui) {
    const auto u = static_cast<std::size_t>(ui);
    auto dst = out.row(u);
    const auto self = in.row(u);
    const double wu = 1.0 / static_cast<double>(adj.offsets[u + 1] - adj.offsets[u] + 1);
    for (std::size_t j = 0; j < in.cols; ++j) dst[j] = wu * self[j];
    for (std::size_t e = adj.offsets[u]; e < adj.offsets[u + 1]; ++e) {
      const NodeId v = adj.columns[e];
      const double wv = 1.0 / static_cast<double>(adj.offsets[v + 1] - adj.offsets[v] + 1);
      const auto src = in.row(v);
      for (std::size_t j = 0; j < in.cols; ++j) dst[j] += wv * src[j];
    }
  }
}

void matmul(const Matrix& a, std::span<const double> b, std::size_t b_cols, Matrix& out) {
  out = Matrix(a.rows, b_cols);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.data() + k * b_cols;
      for (std::size_t j = 0; j < b_cols; ++j) dst[j] += aik * brow[j];
    }
  }
}

void transpose_matmul(const Matrix& a, const Matrix& b, std::span<double> out) {
  std::vector<NodeId> rows(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) rows[i] = static_cast<NodeId>(i);
  blocked_reduce(rows, out, [&](std::span<const NodeId> block, std::span<double> acc) {
    for (NodeId i : block) {
      const auto brow = b.row(i);
      for (std::size_t k = 0; k < a.cols; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols; ++j) acc[k * b.cols + j] += aik * brow[j];
      }
    }
  });
}

void softmax_losses(const Matrix& z, std::span<const double> weights, std::size_t classes,
                    std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                    std::span<double> out) {
  const auto count = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel
  {
    std::vector<double> logits(classes), probs(classes);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const NodeId v = nodes[static_cast<std::size_t>(i)];
      row_logits(z, v, weights, classes, logits);
      const double lse = softmax(logits, probs);
      out[static_cast<std::size_t>(i)] = lse - logits[static_cast<std::size_t>(labels[v])];
    }
  }
}

void softmax_gradient_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                          std::span<const std::int32_t> labels, std::span<const NodeId> nodes,
                          std::span<double> out) {
  blocked_reduce(nodes, out, [&](std::span<const NodeId> block, std::span<double> acc) {
    std::vector<double> logits(classes), probs(classes);
    for (NodeId v : block) {
      row_logits(z, v, weights, classes, logits);
      softmax(logits, probs);
      probs[static_cast<std::size_t>(labels[v])] -= 1.0;
      for (std::size_t j = 0; j < z.cols; ++j) {
        const double zj = z(v, j);
        if (zj == 0.0) continue;
        for (std::size_t a = 0; a < classes; ++a) acc[j * classes + a] += zj * probs[a];
      }
    }
  });
}

void softmax_hvp_sum(const Matrix& z, std::span<const double> weights, std::size_t classes,
                     std::span<const NodeId> nodes, std::span<const double> direction,
                     std::span<double> out) {
  blocked_reduce(nodes, out, [&](std::span<const NodeId> block, std::span<double> acc) {
    std::vector<double> logits(classes), probs(classes), dlogits(classes);
    for (NodeId v : block) {
      row_logits(z, v, weights, classes, logits);
      row_logits(z, v, direction, classes, dlogits);
      softmax(logits, probs);
      double pa = 0.0;
      for (std::size_t a = 0; a < classes; ++a) pa += probs[a] * dlogits[a];
      for (std::size_t a = 0; a < classes; ++a) dlogits[a] = probs[a] * (dlogits[a] - pa);
      for (std::size_t j = 0; j < z.cols; ++j) {
        const double zj = z(v, j);
        if (zj == 0.0) continue;
        for (std::size_t a = 0; a < classes; ++a) acc[j * classes + a] += zj * dlogits[a];
      }
    }
  });
}

}  // namespace certun::kernels::parallel
