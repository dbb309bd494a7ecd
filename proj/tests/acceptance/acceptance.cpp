// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/fixtures.hpp"
#include "certun/certification.hpp"
#include "certun/config.hpp"
#include "certun/evaluation.hpp"
#include "certun/influence.hpp"
#include "certun/oracle.hpp"
#include "certun/pipeline.hpp"
#include "certun/report.hpp"
#include "certun/synthetic.hpp"

using namespace certun;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelSpec sgc(int k = 2) { return {ModelKind::Sgc, k, 0.05, 16}; }

TrainedModel fit(const AttributedGraph& g, const ModelSpec& spec, const TrainOptions& opts = {}) {
  auto model = train(Objective(g, spec), initial_parameters(spec, g.feature_dim(), g.num_classes(), 0), opts, 0);
  model.spec = spec;
  return model;
}

// The desk-scale synthetic graph: 300-node, 4-class SBM.
AttributedGraph sbm(std::uint64_t seed, std::size_t nodes = 300) {
  SyntheticSpec spec;
  spec.num_nodes = nodes;
  return gen_synthetic(spec, seed);
}

std::vector<NodeId> to_vector(const NodeSet& s) { return {s.begin(), s.end()}; }

template <class T>
std::vector<T> seeded_prefix(std::vector<T> items, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
  items.resize(std::min(count, items.size()));
  return items;
}

// One random request of a single category on g.
UnlearnRequest random_request(const AttributedGraph& g, Rng& rng, int category) {
  const auto pool = to_vector(g.train_nodes());
  const auto edges = g.edges();
  const std::size_t count = 1 + rng.below(3);
  UnlearnRequest req;
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < count; ++i) nodes.push_back(pool[rng.below(pool.size())]);
  switch (category) {
    case 0: req.nodes = NodeSet::from_unsorted(nodes); break;
    case 1: req.attrs_full = NodeSet::from_unsorted(nodes); break;
    case 2:
      for (NodeId v : nodes) req.attrs_partial.push_back({v, {rng.below(g.feature_dim())}});
      break;
    default:
      for (std::size_t i = 0; i < count && !edges.empty(); ++i) req.edges.push_back(edges[rng.below(edges.size())]);
  }
  req.normalize();
  return req;
}

// Random request mixing every category, entities drawn from all nodes.
UnlearnRequest random_mixed_request(const AttributedGraph& g, Rng& rng) {
  const std::size_t n = g.num_nodes();
  UnlearnRequest req;
  req.nodes = {static_cast<NodeId>(rng.below(n))};
  for (int i = 0; i < 2; ++i) {
    const NodeId v = static_cast<NodeId>(rng.below(n));
    if (!req.nodes.contains(v)) req.attrs_partial.push_back({v, {rng.below(g.feature_dim())}});
  }
  const NodeId f = static_cast<NodeId>(rng.below(n));
  if (!req.nodes.contains(f)) req.attrs_full = {f};
  const auto edges = g.edges();
  if (!edges.empty()) req.edges = {edges[rng.below(edges.size())]};
  req.normalize();
  return req;
}

// ---------------------------------------------------------------------------

Outcome category_additivity() {
  const auto t0 = std::chrono::steady_clock::now();
  TrainOptions tight;
  tight.tol = 1e-11;
  double worst = 0.0;
  int instances = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const int category = trial % 4;
    const auto g = fixtures::random_graph(1000 + trial, 20 + trial, 3 + trial % 3, 3, 0.08);
    const auto model = fit(g, sgc(1 + trial % 3), tight);
    Rng rng(trial);
    const auto req = random_request(g, rng, category);
    const auto sets = compute_affected_sets(g, req, model.spec.k);
    const auto after_g = apply_deletion(g, req).graph;
    const Objective before(g, model.spec), after(after_g, model.spec);
    const XiObjective xi(before, after, sets, 1.0 / before.num_train());
    const auto arg = argmin_xi(xi, model.theta, tight);
    const auto re = retrain(model, g, req, tight);
    worst = std::max(worst, distance(arg.x, re.theta) / (1.0 + norm2(re.theta)));
    ++instances;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-5 && secs < 60.0,
          std::to_string(instances) + " instances, 4 categories, max rel dist " + fmt(worst) +
              " (tol 1e-5), " + fmt(secs, 3) + " s"};
}

Outcome locality_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t compared = 0, mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = fixtures::random_graph(2000 + trial, 40, 4, 3, 0.05);
    Rng rng(trial);
    const auto req = random_mixed_request(g, rng);
    const ModelSpec spec = trial % 4 == 3 ? ModelSpec{ModelKind::Gcn2, 2, 0.05, 6} : sgc(1 + trial % 3);
    const auto sets = compute_affected_sets(g, req, depth(spec));
    NodeSet affected;
    for (const auto* s : sets.subtracted()) affected = affected.united(*s);
    const auto after_g = apply_deletion(g, req).graph;
    const Objective a(g, spec), b(after_g, spec);
    const auto theta = fixtures::random_vector(rng, a.num_params());
    for (NodeId v : after_g.train_nodes()) {
      if (affected.contains(v)) continue;
      ++compared;
      if (a.node_loss(theta, v) != b.node_loss(theta, v)) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && compared > 0 && secs < 10.0,
          "100 triples, " + std::to_string(compared) + " unaffected losses, " + std::to_string(mismatches) +
              " not bit-identical, " + fmt(secs, 3) + " s"};
}

// Hessian of the SGC objective assembled sample by sample.
Matrix naive_sgc_hessian(const Objective& obj, std::span<const double> theta) {
  const std::size_t d = obj.graph().feature_dim(), c = obj.graph().num_classes(), p = d * c;
  const Matrix& z = obj.propagated();
  const Matrix prob = obj.probabilities(theta);
  Matrix h(p, p);
  const double inv_m = 1.0 / obj.num_train();
  for (NodeId v : obj.training_nodes())
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t a = 0; a < c; ++a)
        for (std::size_t l = 0; l < d; ++l)
          for (std::size_t b = 0; b < c; ++b)
            h(j * c + a, l * c + b) +=
                inv_m * z(v, j) * z(v, l) * prob(v, a) * ((a == b ? 1.0 : 0.0) - prob(v, b));
  for (std::size_t i = 0; i < p; ++i) h(i, i) += obj.spec().reg_lambda;
  return h;
}

Outcome gradient_hvp() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_grad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = fixtures::random_graph(3000 + trial, 30, 4, 3, 0.1);
    const ModelSpec spec = trial % 2 ? ModelSpec{ModelKind::Gcn2, 2, 0.05, 5} : sgc();
    const Objective obj(g, spec);
    Rng rng(trial);
    const auto theta = fixtures::random_vector(rng, obj.num_params(), 0.5);
    auto u = fixtures::random_vector(rng, obj.num_params());
    const double nu = norm2(u);
    for (double& x : u) x /= nu;
    const double h = 1e-5;
    Vector tp = theta, tm = theta;
    axpy(h, u, tp);
    axpy(-h, u, tm);
    const double fd = (obj.loss(tp) - obj.loss(tm)) / (2 * h);
    const double an = dot(obj.gradient(theta), u);
    worst_grad = std::max(worst_grad, std::abs(fd - an) / (1.0 + std::abs(an)));
  }
  double worst_hvp = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto g = fixtures::random_graph(3100 + trial, 120, 40, 5, 0.03);  // p = 200
    const Objective obj(g, sgc());
    Rng rng(trial);
    const auto theta = fixtures::random_vector(rng, 200, 0.2);
    const Matrix h = naive_sgc_hessian(obj, theta);
    for (int k = 0; k < 5; ++k) {
      const auto v = fixtures::random_vector(rng, 200);
      Vector hv(200, 0.0);
      for (std::size_t i = 0; i < 200; ++i) hv[i] = dot(h.row(i), v);
      worst_hvp = std::max(worst_hvp, distance(obj.hvp(theta, v), hv) / norm2(hv));
    }
  }
  const double secs = seconds_since(t0);
  return {worst_grad <= 1e-5 && worst_hvp <= 1e-8 && secs < 30.0,
          "20 directional checks max rel err " + fmt(worst_grad) + " (tol 1e-5); hvp vs explicit Hessian p=200 " +
              fmt(worst_hvp) + " (tol 1e-8), " + fmt(secs, 3) + " s"};
}

Outcome solver_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_cg = 0.0, worst_st = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto g = fixtures::random_graph(4000 + trial, 150, 40, 5, 0.03);  // p = 200
    const Objective obj(g, sgc());
    const auto theta = train(obj, {}, {}, 0).theta;
    Rng rng(trial);
    const auto b = fixtures::random_vector(rng, 200);
    const LinearOperator op = [&](const Vector& v) { return obj.hvp(theta, v); };
    const auto direct = solve_direct(obj.explicit_hessian(theta), b);
    const auto cg = solve_cg(op, b, 1e-10, 10000);
    const double scale = 1.1 * estimate_top_eigenvalue(op, 200);
    const auto st = solve_stochastic(op, b, 1000, scale, 0.0);
    worst_cg = std::max(worst_cg, distance(cg.x, direct.x) / norm2(direct.x));
    worst_st = std::max(worst_st, distance(st.x, direct.x) / norm2(direct.x));
  }
  const double secs = seconds_since(t0);
  return {worst_cg <= 1e-6 && worst_st <= 1e-3 && secs < 30.0,
          "p=200 x3: CG vs direct " + fmt(worst_cg) + " (tol 1e-6), stochastic t=1000 vs direct " + fmt(worst_st) +
              " (tol 1e-3), " + fmt(secs, 3) + " s"};
}

// Shared oracle sweep on the 300-node SBM.
struct SweepPoint {
  std::uint64_t seed = 0;
  RequestType type = RequestType::Node;
  double ratio = 0.0;
  OracleComparison cmp;
};

std::vector<SweepPoint> run_sweep(const std::vector<std::uint64_t>& seeds, RequestType type,
                                  const std::vector<double>& ratios) {
  std::vector<SweepPoint> out;
  RunConfig config;
  for (auto seed : seeds) {
    const auto g = sbm(seed);
    const auto model = fit(g, sgc());
    for (double r : ratios) {
      const auto req = generate_request(g, type, r, config.attr_dims_ratio, 100 + seed);
      out.push_back({seed, type, r, compare_with_oracle(config, model, g, req)});
    }
  }
  return out;
}

const std::vector<std::uint64_t> kSeeds{0, 1, 2, 3, 4};
const std::vector<double> kQualityRatios{0.01, 0.02, 0.05};
const std::vector<double> kEdgeRatios{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};

Outcome approximation_quality(const std::vector<SweepPoint>& sweep, double secs) {
  int halved = 0, monotone = 0;
  std::string per_seed;
  for (auto seed : kSeeds) {
    std::vector<double> rho;
    for (const auto& p : sweep)
      if (p.seed == seed) rho.push_back(p.cmp.distances.tilde_bar / p.cmp.distances.star_tilde);
    halved += rho[0] <= 0.5;
    monotone += rho[0] <= rho[1] && rho[1] <= rho[2];
    per_seed += (per_seed.empty() ? "" : "; ") + fmt(rho[0], 3) + "," + fmt(rho[1], 3) + "," + fmt(rho[2], 3);
  }
  return {halved >= 3 && monotone >= 3 && secs < 300.0,
          "ratio ||bar-tilde||/||star-tilde|| at 1/2/5% per seed [" + per_seed + "]; <=0.5 at 1% in " +
              std::to_string(halved) + "/5, nonincreasing toward 1% in " + std::to_string(monotone) +
              "/5 (majority needed), " + fmt(secs, 3) + " s"};
}

Outcome bound_validity(const std::vector<SweepPoint>& node_sweep, const std::vector<SweepPoint>& edge_sweep,
                       double secs) {
  std::size_t points = 0, hold = 0, flagged = 0, unflagged_failures = 0;
  double min_slack = INFINITY;
  for (const auto* sweep : {&node_sweep, &edge_sweep})
    for (const auto& p : *sweep) {
      ++points;
      const double actual = p.cmp.distances.tilde_bar;
      hold += p.cmp.cert_measured.approx_distance_bound >= actual;
      min_slack = std::min(min_slack, p.cmp.cert_measured.approx_distance_bound / std::max(actual, 1e-300));
      flagged += p.cmp.assumptions_violated;
      if (p.cmp.cert_assumed.approx_distance_bound < actual && !p.cmp.assumptions_violated) ++unflagged_failures;
    }
  return {hold == points && unflagged_failures == 0 && secs < 600.0,
          std::to_string(hold) + "/" + std::to_string(points) +
              " points with measured-constant bound >= actual (min bound/actual " + fmt(min_slack) + "); " +
              std::to_string(flagged) + " runs flagged as violating the default constants, " +
              std::to_string(unflagged_failures) + " unflagged default-bound failures, " + fmt(secs, 3) + " s"};
}

Outcome bound_monotonicity() {
  std::string detail, drops;
  bool ok = true;
  for (RequestType type : {RequestType::Node, RequestType::Edge}) {
    const auto sweep = run_sweep({0}, type, kEdgeRatios);
    std::string seq;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      const double b = sweep[i].cmp.cert_assumed.approx_distance_bound;
      const double prev = i > 0 ? sweep[i - 1].cmp.cert_assumed.approx_distance_bound : b;
      if (b < prev) {
        ok = false;
        drops += (drops.empty() ? "" : ", ") + std::string(to_string(type)) + " " + fmt(100 * sweep[i].ratio, 2) +
                 "%: " + fmt(prev, 9) + " -> " + fmt(b, 9) + " at |V~|=" +
                 std::to_string(sweep[i].cmp.cert_assumed.v_tilde_size);
      }
      seq += (seq.empty() ? "" : ",") + fmt(b, 3);
    }
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(type)) + " 1..10%: " + seq;
  }
  return {ok, "approx_distance_bound (default constants) over ratio: " + detail +
                  (ok ? "; nondecreasing" : "; decreases [" + drops + "]")};
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Outcome efficiency() {
  const auto g = sbm(0);
  const auto model = fit(g, sgc());
  const RunConfig config;
  const std::vector<double> ratios{0.001, 0.01, 0.05, 0.10};
  std::vector<double> u, r;
  bool faster = true;
  std::string rows;
  for (double ratio : ratios) {
    const auto req = generate_request(g, RequestType::Node, ratio, 0.2, 100);
    std::vector<double> us, rs;
    for (int rep = 0; rep < 15; ++rep) {
      us.push_back(timed([&] { (void)unlearn(model, g, req, config.solver); }));
      rs.push_back(timed([&] { (void)retrain(model, g, req, config.train); }));
    }
    u.push_back(median(us));
    r.push_back(median(rs));
    faster = faster && u.back() < r.back();
    rows += (rows.empty() ? "" : "; ") + fmt(100 * ratio, 2) + "%: " + fmt(1e3 * u.back(), 3) + " vs " +
            fmt(1e3 * r.back(), 3) + " ms";
  }
  const double u_spread = *std::max_element(u.begin(), u.end()) / *std::min_element(u.begin(), u.end());
  const double r_spread = *std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end());
  return {faster && u_spread < 2.0 && r_spread < 2.0,
          "300-node SBM, unlearn vs retrain median of 15 [" + rows + "]; unlearn spread " + fmt(u_spread, 3) +
              "x, retrain spread " + fmt(r_spread, 3) + "x (both < 2x); converted citation data not present"};
}

// The noise scale used for the utility and effectiveness runs: the epsilon
// is chosen so that sigma lands at this value.
constexpr double kSigma = 1e-2;

Vector certify(const OracleComparison& cmp, std::uint64_t seed) {
  const double eps = epsilon_for_sigma(cmp.cert_assumed.approx_distance_bound, kSigma, cmp.cert_assumed.delta);
  const double sigma = calibrate_sigma(cmp.cert_assumed.approx_distance_bound, eps, cmp.cert_assumed.delta);
  return add_gaussian_noise(cmp.influence.theta_bar, sigma, seed);
}

Outcome utility() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig config;
  bool ok = true;
  std::string rows;
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto g = sbm(seed);
    const auto model = fit(g, sgc());
    const auto req = generate_request(g, RequestType::Node, 0.05, 0.2, 100 + seed);
    const auto cmp = compare_with_oracle(config, model, g, req);
    const Objective after(cmp.influence.graph_after, model.spec);
    const double fc = f1_micro(after, certify(cmp, seed));
    const double fr = f1_micro(after, cmp.retrained.theta);
    ok = ok && fc >= fr - 0.05;
    rows += (rows.empty() ? "" : "; ") + fmt(fc, 3) + " vs " + fmt(fr, 3);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 600.0, "SBM fallback (300 nodes), 5% nodes, sigma=" + fmt(kSigma) +
                                  ": f1 certified vs retrained per seed [" + rows + "] (margin 0.05), " +
                                  fmt(secs, 3) + " s"};
}

Outcome effectiveness() {
  const RunConfig config;
  int good = 0;
  std::string rows;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = sbm(seed, 1000);
    const auto model = fit(g, sgc());
    const auto req = generate_request(g, RequestType::Node, 0.05, 0.2, 100 + seed);
    const auto cmp = compare_with_oracle(config, model, g, req);
    const auto removed = to_vector(req.nodes);
    const auto test = to_vector(g.test_nodes());
    const std::size_t count = std::min(removed.size(), test.size());
    const auto pos = NodeSet::from_unsorted(seeded_prefix(removed, count, seed + 1));
    const auto neg = NodeSet::from_unsorted(seeded_prefix(test, count, seed + 2));
    const Objective original(g, model.spec);
    const double star = mi_proxy_auc(original, model.theta, pos, neg);
    const double cert = mi_proxy_auc(original, certify(cmp, seed), pos, neg);
    good += cert <= 0.60 && cert <= star;
    rows += (rows.empty() ? "" : " ") + fmt(cert, 3) + "/" + fmt(star, 3);
  }
  // Gated: one run per dims ratio on the fixed seed 0. Seeds 1 and 2 and the
  // retrained model are reported alongside.
  bool attr_ok = true;
  std::size_t extra_ordered = 0, extra_runs = 0;
  std::string attr_rows;
  for (double dims : {0.2, 0.5, 0.8}) {
    for (std::uint64_t seed : {0, 1, 2}) {
      const auto g = sbm(seed);
      const auto model = fit(g, sgc());
      const auto req = generate_request(g, RequestType::AttrPartial, 0.05, dims, 100 + seed);
      const auto cmp = compare_with_oracle(config, model, g, req);
      const double star = attr_unlearn_loss(model.spec, model.theta, g, req);
      const double cert = attr_unlearn_loss(model.spec, certify(cmp, seed), g, req);
      const double re = attr_unlearn_loss(model.spec, cmp.retrained.theta, g, req);
      if (seed == 0) {
        attr_ok = attr_ok && cert <= star;
        attr_rows += (attr_rows.empty() ? "" : "; ") + fmt(100 * dims, 2) + "%: " + fmt(cert) + " vs " +
                     fmt(star) + " (retrained " + fmt(re) + ")";
      } else {
        ++extra_runs;
        extra_ordered += cert <= star;
      }
    }
  }
  return {good >= 8 && attr_ok,
          "node MI AUC certified/original (1000-node SBM, 5%, sigma=" + fmt(kSigma) + ") [" + rows + "]: " +
              std::to_string(good) + "/10 meet <=0.60 and <=original (need 8); attr loss certified vs original, seed 0 [" +
              attr_rows + "] " + (attr_ok ? "ordered" : "NOT ordered") + "; seeds 1-2 ordered in " +
              std::to_string(extra_ordered) + "/" + std::to_string(extra_runs)};
}

Outcome certification_arithmetic() {
  const double sigma = calibrate_sigma(1.0, 1.0, 0.05);
  const double bound = bound_optimals({}, 100, 1, 5);
  const Vector theta{0.5, -1.0, 2.0, 0.0};
  const bool same = add_gaussian_noise(theta, 0.3, 11) == add_gaussian_noise(theta, 0.3, 11);
  const bool ok = std::abs(sigma - 2.5373) <= 1e-4 && std::abs(bound - 3.5145) <= 1e-4 && same;
  return {ok, "calibrate_sigma(1,1,0.05)=" + fmt(sigma, 8) + " (2.5373 +/- 1e-4), bound_optimals=" + fmt(bound, 8) +
                  " (3.5145 +/- 1e-4), seeded noise " + (same ? "identical" : "DIFFERS")};
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CERTUN_CLI) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome pipeline_determinism() {
  const auto dir = fixtures::temp_dir("acceptance_determinism");
  std::size_t compared = 0, differing = 0;
  for (const std::string cmd : {"train", "unlearn", "certify", "evaluate", "bench-bounds"}) {
    // Same command line both times; the first run's outputs are moved aside.
    const auto out = dir / cmd, first = dir / (cmd + "_first");
    const std::string args = cmd + " --ratios 0.01,0.05 --request_type node --out " + out.string();
    const auto a = run_cli(args);
    std::filesystem::rename(out, first);
    const auto b = run_cli(args);
    if (a.code != 0 || b.code != 0) return {false, cmd + " exited with " + std::to_string(a.code) + "/" + std::to_string(b.code)};
    for (const auto& entry : std::filesystem::directory_iterator(first)) {
      const auto name = entry.path().filename();
      const std::string x = read_file(first / name), y = read_file(out / name);
      ++compared;
      if (name.extension() == ".json") {
        differing += strip_timing(Json::parse(x)).dump() != strip_timing(Json::parse(y)).dump();
      } else {
        differing += x != y;
      }
    }
    ++compared;
    differing += strip_timing(Json::parse(a.out)).dump() != strip_timing(Json::parse(b.out)).dump();
  }
  return {differing == 0, "5 subcommands run twice, " + std::to_string(compared) + " outputs compared (JSON without timing, others byte-wise), " +
                              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const std::string& name, const Outcome& o) {
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report("category_additivity", category_additivity());
  report("locality_exactness", locality_exactness());
  report("gradient_hvp_correctness", gradient_hvp());
  report("solver_agreement", solver_agreement());

  auto t0 = std::chrono::steady_clock::now();
  const auto node_sweep = run_sweep(kSeeds, RequestType::Node, kQualityRatios);
  const double node_secs = seconds_since(t0);
  report("approximation_quality", approximation_quality(node_sweep, node_secs));
  t0 = std::chrono::steady_clock::now();
  const auto edge_sweep = run_sweep(kSeeds, RequestType::Edge, kEdgeRatios);
  report("bound_validity", bound_validity(node_sweep, edge_sweep, node_secs + seconds_since(t0)));
  report("bound_monotonicity", bound_monotonicity());

  report("efficiency", efficiency());
  report("utility_retention", utility());
  report("effectiveness_direction", effectiveness());
  report("certification_arithmetic", certification_arithmetic());
  report("pipeline_determinism", pipeline_determinism());

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
