#include <doctest.h>

#include <omp.h>

#include "certun/kernels.hpp"
#include "fixtures.hpp"

using namespace certun;
namespace ks = kernels::serial;
namespace kp = kernels::parallel;

namespace {

struct Setup {
  AttributedGraph g;
  std::vector<double> w;
  std::vector<double> dir;
  std::vector<NodeId> nodes;
};

// Large enough to span several reduction blocks.
Setup make_setup(std::uint64_t seed) {
  Setup s;
  s.g = fixtures::random_graph(seed, 300, 7, 4, 0.02);
  Rng rng(seed + 1);
  s.w = fixtures::random_vector(rng, 7 * 4);
  s.dir = fixtures::random_vector(rng, 7 * 4);
  const auto train = s.g.train_nodes();
  s.nodes.assign(train.begin(), train.end());
  return s;
}

double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / (1.0 + std::abs(a[i])));
  return worst;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("row-wise kernels are bitwise identical to the serial reference") {
    const auto s = make_setup(1);
    const auto adj = kernels::CsrView::of(s.g);
    Matrix a, b;
    ks::propagate_step(adj, s.g.features(), a);
    kp::propagate_step(adj, s.g.features(), b);
    CHECK(a == b);
    ks::propagate_transpose_step(adj, s.g.features(), a);
    kp::propagate_transpose_step(adj, s.g.features(), b);
    CHECK(a == b);
    ks::matmul(s.g.features(), s.w, 4, a);
    kp::matmul(s.g.features(), s.w, 4, b);
    CHECK(a == b);

    std::vector<double> la(s.nodes.size()), lb(s.nodes.size());
    ks::softmax_losses(s.g.features(), s.w, 4, s.g.labels(), s.nodes, la);
    kp::softmax_losses(s.g.features(), s.w, 4, s.g.labels(), s.nodes, lb);
    CHECK(la == lb);
  }

  TEST_CASE("reductions agree with the serial reference") {
    const auto s = make_setup(2);
    std::vector<double> ga(28, 0.0), gb(28, 0.0);
    ks::softmax_gradient_sum(s.g.features(), s.w, 4, s.g.labels(), s.nodes, ga);
    kp::softmax_gradient_sum(s.g.features(), s.w, 4, s.g.labels(), s.nodes, gb);
    CHECK(max_rel_diff(ga, gb) < 1e-13);

    std::vector<double> ha(28, 0.0), hb(28, 0.0);
    ks::softmax_hvp_sum(s.g.features(), s.w, 4, s.nodes, s.dir, ha);
    kp::softmax_hvp_sum(s.g.features(), s.w, 4, s.nodes, s.dir, hb);
    CHECK(max_rel_diff(ha, hb) < 1e-13);

    Matrix z;
    ks::matmul(s.g.features(), s.w, 4, z);
    std::vector<double> ta(7 * 4, 0.0), tb(7 * 4, 0.0);
    ks::transpose_matmul(s.g.features(), z, ta);
    kp::transpose_matmul(s.g.features(), z, tb);
    CHECK(max_rel_diff(ta, tb) < 1e-13);
  }

  TEST_CASE("parallel results do not depend on the thread count") {
    const auto s = make_setup(3);
    const int saved = omp_get_max_threads();
    std::vector<std::vector<double>> grads, hvps, tms;
    for (int threads : {1, 2, 3, 8}) {
      omp_set_num_threads(threads);
      std::vector<double> g(28, 0.0), h(28, 0.0), t(28, 0.0);
      kp::softmax_gradient_sum(s.g.features(), s.w, 4, s.g.labels(), s.nodes, g);
      kp::softmax_hvp_sum(s.g.features(), s.w, 4, s.nodes, s.dir, h);
      Matrix z;
      kp::matmul(s.g.features(), s.w, 4, z);
      kp::transpose_matmul(s.g.features(), z, t);
      grads.push_back(g);
      hvps.push_back(h);
      tms.push_back(t);
    }
    omp_set_num_threads(saved);
    for (std::size_t i = 1; i < grads.size(); ++i) {
      CHECK(grads[i] == grads[0]);
      CHECK(hvps[i] == hvps[0]);
      CHECK(tms[i] == tms[0]);
    }
  }

  TEST_CASE("propagation of two connected nodes averages them") {
    GraphData data = fixtures::path_data(2);
    data.features = Matrix(2, 2);
    data.features(0, 0) = 1.0;
    data.features(1, 1) = 1.0;
    const auto g = AttributedGraph::build(data);
    Matrix out;
    ks::propagate_step(kernels::CsrView::of(g), g.features(), out);
    for (std::size_t v = 0; v < 2; ++v) {
      CHECK(out(v, 0) == 0.5);
      CHECK(out(v, 1) == 0.5);
    }
  }

  TEST_CASE("transpose propagation is the adjoint of propagation") {
    const auto s = make_setup(4);
    const auto adj = kernels::CsrView::of(s.g);
    Rng rng(9);
    Matrix x(s.g.num_nodes(), 3), y(s.g.num_nodes(), 3);
    for (double& v : x.data) v = rng.normal();
    for (double& v : y.data) v = rng.normal();
    Matrix sx, sty;
    kp::propagate_step(adj, x, sx);
    kp::propagate_transpose_step(adj, y, sty);
    CHECK(dot(sx.data, y.data) == doctest::Approx(dot(x.data, sty.data)).epsilon(1e-12));
  }

  TEST_CASE("softmax is stable for large logits") {
    const std::vector<double> logits{1000.0, 1000.0, -1000.0};
    std::vector<double> probs(3);
    const double lse = kernels::softmax(logits, probs);
    CHECK(lse == doctest::Approx(1000.0 + std::log(2.0)));
    CHECK(probs[0] == doctest::Approx(0.5));
    CHECK(probs[2] == 0.0);
  }
}
