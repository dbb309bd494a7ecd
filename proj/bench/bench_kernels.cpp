// Serial reference kernels against their OpenMP counterparts on a
// synthetic SBM. Pass --benchmark_filter=Propagate to narrow the run.

#include <benchmark/benchmark.h>

#include <map>

#include "certun/kernels.hpp"
#include "certun/rng.hpp"
#include "certun/synthetic.hpp"

using namespace certun;

namespace {

struct Fixture {
  AttributedGraph g;
  Matrix x;
  Vector weights;
  std::vector<NodeId> nodes;
  Vector direction;
  std::size_t classes = 8;

  explicit Fixture(std::size_t n) {
    SyntheticSpec spec;
    spec.num_nodes = n;
    spec.num_classes = classes;
    spec.feature_dim = 64;
    spec.p_intra = 20.0 / n;
    spec.p_inter = 2.0 / n;
    g = gen_synthetic(spec, 1);
    x = g.features();
    Rng rng(2);
    weights.resize(64 * classes);
    for (double& w : weights) w = 0.1 * rng.normal();
    direction.resize(weights.size());
    for (double& w : direction) w = rng.normal();
    for (NodeId v = 0; v < n; ++v) nodes.push_back(v);
  }
};

const Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

template <bool Parallel>
void Propagate(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const auto adj = kernels::CsrView::of(f.g);
  Matrix out(f.x.rows, f.x.cols);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::propagate_step(adj, f.x, out);
    else kernels::serial::propagate_step(adj, f.x, out);
    benchmark::DoNotOptimize(out.data.data());
  }
}

template <bool Parallel>
void GradientSum(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const auto labels = f.g.to_data().labels;
  Vector out(f.weights.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::softmax_gradient_sum(f.x, f.weights, f.classes, labels, f.nodes, out);
    else
      kernels::serial::softmax_gradient_sum(f.x, f.weights, f.classes, labels, f.nodes, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void HvpSum(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  Vector out(f.weights.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::softmax_hvp_sum(f.x, f.weights, f.classes, f.nodes, f.direction, out);
    else
      kernels::serial::softmax_hvp_sum(f.x, f.weights, f.classes, f.nodes, f.direction, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void Matmul(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  Matrix out(f.x.rows, f.classes);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::matmul(f.x, f.weights, f.classes, out);
    else kernels::serial::matmul(f.x, f.weights, f.classes, out);
    benchmark::DoNotOptimize(out.data.data());
  }
}

}  // namespace

#define CERTUN_BENCH_PAIR(name)                                                         \
  BENCHMARK(name<false>)->Name(#name "/serial")->Arg(2000)->Arg(20000)->UseRealTime();  \
  BENCHMARK(name<true>)->Name(#name "/parallel")->Arg(2000)->Arg(20000)->UseRealTime();

CERTUN_BENCH_PAIR(Propagate)
CERTUN_BENCH_PAIR(GradientSum)
CERTUN_BENCH_PAIR(HvpSum)
CERTUN_BENCH_PAIR(Matmul)

BENCHMARK_MAIN();
