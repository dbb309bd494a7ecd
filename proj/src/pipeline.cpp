#include "certun/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "certun/checkpoint.hpp"
#include "certun/error.hpp"
#include "certun/evaluation.hpp"
#include "certun/rng.hpp"
#include "certun/synthetic.hpp"

namespace certun {

namespace fs = std::filesystem;

void PendingOutputs::add(const std::string& name, std::string bytes) {
  files_.emplace_back(name, std::move(bytes));
}

void PendingOutputs::add_json(const std::string& name, const Json& doc) { add(name, doc.dump(2) + "\n"); }

std::vector<std::string> PendingOutputs::names() const {
  std::vector<std::string> out;
  for (const auto& f : files_) out.push_back(f.first);
  return out;
}

void PendingOutputs::flush() const {
  fs::create_directories(dir_);
  for (const auto& [name, bytes] : files_) write_text(dir_ / name, bytes);
}

AttributedGraph load_graph(const RunConfig& config, std::vector<std::string>* warnings) {
  if (config.dataset.empty()) return gen_synthetic(config.synthetic, config.data_seed);
  LoadResult loaded = load_dataset(config.dataset);
  if (warnings)
    for (auto& w : loaded.warnings) warnings->push_back(std::move(w));
  return std::move(loaded.graph);
}

TrainedModel obtain_model(const RunConfig& config, const AttributedGraph& g, double* train_seconds) {
  if (!config.checkpoint.empty()) {
    TrainedModel model = load_checkpoint(config.checkpoint);
    const auto expected = num_params(model.spec, g.feature_dim(), g.num_classes());
    if (model.theta.size() != expected)
      throw Error(ErrorCode::Validation, "checkpoint has " + std::to_string(model.theta.size()) +
                                             " parameters but the graph needs " + std::to_string(expected));
    if (train_seconds) *train_seconds = 0.0;
    return model;
  }
  const Objective objective(g, config.model);
  auto [model, seconds] = timed([&] {
    return train(objective,
                 initial_parameters(config.model, g.feature_dim(), g.num_classes(), config.train_seed),
                 config.train, config.train_seed);
  });
  if (train_seconds) *train_seconds = seconds;
  return model;
}

UnlearnRequest obtain_request(const RunConfig& config, const AttributedGraph& g) {
  UnlearnRequest req = config.request.empty()
                           ? generate_request(g, config.request_type, config.request_ratio,
                                              config.attr_dims_ratio, config.sample_seed)
                           : load_request(config.request);
  require_valid(g, req);
  return req;
}

OracleComparison compare_with_oracle(const RunConfig& config, const TrainedModel& model,
                                     const AttributedGraph& g, const UnlearnRequest& req) {
  OracleComparison out;
  auto [influence, unlearn_s] = timed([&] { return unlearn(model, g, req, config.solver); });
  out.influence = std::move(influence);
  out.unlearn_seconds = unlearn_s;
  auto [retrained, retrain_s] = timed([&] { return retrain(model, g, req, config.train); });
  out.retrained = std::move(retrained);
  out.retrain_seconds = retrain_s;

  const auto& inf = out.influence;
  out.distances = parameter_distances(inf.theta_star, out.retrained.theta, inf.theta_bar);
  const std::size_t m = inf.m_used;
  const double norm_delta = norm2(inf.delta_theta_bar);
  out.cert_assumed = make_certificate(config.constants, m, inf.delta_v_size, inf.v_tilde.size(), norm_delta,
                                      config.epsilon, config.delta, config.noise_seed);
  out.cert_assumed.actual_distance = out.distances.tilde_bar;

  const Objective before(g, model.spec);
  const Objective after(inf.graph_after, model.spec);
  out.measured = measure_constants(before, after, inf.theta_star, out.retrained.theta);
  AssumptionConstants measured = out.measured.as_constants();
  // A run where nothing moved measures L = 0; keep the bound well defined.
  measured.lipschitz_L = std::max(measured.lipschitz_L, 1e-12);
  measured.loss_bound_C = std::max(measured.loss_bound_C, 1e-12);
  out.cert_measured = make_certificate(measured, m, inf.delta_v_size, inf.v_tilde.size(), norm_delta,
                                       config.epsilon, config.delta, config.noise_seed);
  out.cert_measured.actual_distance = out.distances.tilde_bar;
  out.assumptions_violated = !out.measured.within(config.constants);
  return out;
}

namespace {

Json report_header(const std::string& command, const RunConfig& config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["status"] = "ok";
  Json echo = config_echo(config);
  echo.erase("out");  // output location does not affect results
  j["config"] = std::move(echo);
  return j;
}

Json graph_summary(const AttributedGraph& g) {
  return {{"num_nodes", g.num_nodes()},
          {"num_edges", g.num_edges()},
          {"feature_dim", g.feature_dim()},
          {"num_classes", g.num_classes()},
          {"num_train", g.num_train()},
          {"num_test", g.test_nodes().size()}};
}

Json model_summary(const TrainedModel& model, bool trained_here) {
  Json j;
  j["kind"] = to_string(model.spec.kind);
  j["k"] = model.spec.k;
  j["reg_lambda"] = model.spec.reg_lambda;
  if (model.spec.kind == ModelKind::Gcn2) j["hidden"] = model.spec.hidden;
  j["num_params"] = model.theta.size();
  j["seed"] = model.seed;
  j["source"] = trained_here ? "trained" : "checkpoint";
  if (trained_here) j["train"] = to_json(model.stats);
  j["norm_theta"] = norm2(model.theta);
  return j;
}

TrainedModel with_theta(const TrainedModel& model, Vector theta) {
  TrainedModel out = model;
  out.theta = std::move(theta);
  out.stats = {};
  return out;
}

Json finish(const std::string& command, Json report, PendingOutputs& outputs, Json timing) {
  report[kTimingKey] = std::move(timing);
  Json files = outputs.names();
  files.push_back(command + ".json");
  report["files"] = std::move(files);
  outputs.add_json(command + ".json", report);
  outputs.flush();
  return report;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

template <class T>
std::vector<T> seeded_prefix(std::vector<T> items, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
  items.resize(std::min(count, items.size()));
  return items;
}

}  // namespace

Json cmd_train(const RunConfig& config) {
  std::vector<std::string> warnings;
  const AttributedGraph g = load_graph(config, &warnings);
  RunConfig fresh = config;
  fresh.checkpoint.clear();
  double seconds = 0.0;
  const TrainedModel model = obtain_model(fresh, g, &seconds);
  const Objective objective(g, model.spec);

  Json report = report_header("train", config);
  report["graph"] = graph_summary(g);
  report["model"] = model_summary(model, true);
  if (!g.test_nodes().empty()) report["f1_micro"] = f1_micro(objective, model.theta);
  report["warnings"] = warnings;

  PendingOutputs outputs(config.out);
  outputs.add("model.bin", encode_checkpoint(model));
  outputs.add("config.txt", config_to_text(config));
  return finish("train", std::move(report), outputs, {{"train_seconds", seconds}});
}

namespace {

struct UnlearnStage {
  AttributedGraph graph;
  TrainedModel model;
  UnlearnRequest request;
  InfluenceResult influence;
  CertificateReport certificate;
  double train_seconds = 0.0;
  double unlearn_seconds = 0.0;
  std::vector<std::string> warnings;
};

UnlearnStage run_unlearn_stage(const RunConfig& config) {
  UnlearnStage s;
  s.graph = load_graph(config, &s.warnings);
  s.model = obtain_model(config, s.graph, &s.train_seconds);
  s.request = obtain_request(config, s.graph);
  auto [influence, seconds] = timed([&] { return unlearn(s.model, s.graph, s.request, config.solver); });
  s.influence = std::move(influence);
  s.unlearn_seconds = seconds;
  s.certificate = make_certificate(config.constants, s.influence.m_used, s.influence.delta_v_size,
                                   s.influence.v_tilde.size(), norm2(s.influence.delta_theta_bar),
                                   config.epsilon, config.delta, config.noise_seed);
  return s;
}

Json unlearn_report(const std::string& command, const RunConfig& config, const UnlearnStage& s) {
  Json report = report_header(command, config);
  report["graph"] = graph_summary(s.graph);
  report["model"] = model_summary(s.model, config.checkpoint.empty());
  report["request"] = to_json(s.request);
  report["unlearn"] = to_json(s.influence);
  report["certificate"] = to_json(s.certificate);
  Json warnings = s.warnings;
  for (const auto& w : s.influence.warnings) warnings.push_back(w);
  report["warnings"] = std::move(warnings);
  return report;
}

}  // namespace

Json cmd_unlearn(const RunConfig& config) {
  const UnlearnStage s = run_unlearn_stage(config);
  Json report = unlearn_report("unlearn", config, s);
  const Objective after(s.influence.graph_after, s.model.spec);
  if (!s.influence.graph_after.test_nodes().empty())
    report["f1_micro_theta_bar"] = f1_micro(after, s.influence.theta_bar);

  PendingOutputs outputs(config.out);
  outputs.add("unlearned.bin", encode_checkpoint(with_theta(s.model, s.influence.theta_bar)));
  outputs.add("request.json", request_to_json(s.request));
  outputs.add("config.txt", config_to_text(config));
  return finish("unlearn", std::move(report), outputs,
                {{"train_seconds", s.train_seconds}, {"unlearn_seconds", s.unlearn_seconds}});
}

Json cmd_certify(const RunConfig& config) {
  const UnlearnStage s = run_unlearn_stage(config);
  const Vector certified = add_gaussian_noise(s.influence.theta_bar, s.certificate.sigma, config.noise_seed);
  Json report = unlearn_report("certify", config, s);
  report["noise_norm"] = distance(certified, s.influence.theta_bar);
  const Objective after(s.influence.graph_after, s.model.spec);
  if (!s.influence.graph_after.test_nodes().empty()) {
    report["f1_micro_theta_bar"] = f1_micro(after, s.influence.theta_bar);
    report["f1_micro_certified"] = f1_micro(after, certified);
  }

  PendingOutputs outputs(config.out);
  outputs.add("certified.bin", encode_checkpoint(with_theta(s.model, certified)));
  outputs.add("unlearned.bin", encode_checkpoint(with_theta(s.model, s.influence.theta_bar)));
  outputs.add("request.json", request_to_json(s.request));
  outputs.add("config.txt", config_to_text(config));
  return finish("certify", std::move(report), outputs,
                {{"train_seconds", s.train_seconds}, {"unlearn_seconds", s.unlearn_seconds}});
}

Json cmd_retrain(const RunConfig& config) {
  std::vector<std::string> warnings;
  const AttributedGraph g = load_graph(config, &warnings);
  double train_seconds = 0.0;
  const TrainedModel model = obtain_model(config, g, &train_seconds);
  const UnlearnRequest req = obtain_request(config, g);
  auto [retrained, seconds] = timed([&] { return retrain(model, g, req, config.train); });

  Json report = report_header("retrain", config);
  report["graph"] = graph_summary(g);
  report["model"] = model_summary(model, config.checkpoint.empty());
  report["request"] = to_json(req);
  report["retrain"] = to_json(retrained.stats);
  report["distance_star_tilde"] = distance(model.theta, retrained.theta);
  const AttributedGraph after = apply_deletion(g, req).graph;
  if (!after.test_nodes().empty())
    report["f1_micro_retrained"] = f1_micro(Objective(after, model.spec), retrained.theta);
  report["warnings"] = warnings;

  PendingOutputs outputs(config.out);
  outputs.add("retrained.bin", encode_checkpoint(retrained));
  outputs.add("config.txt", config_to_text(config));
  return finish("retrain", std::move(report), outputs,
                {{"train_seconds", train_seconds}, {"retrain_seconds", seconds}});
}

Json cmd_evaluate(const RunConfig& config) {
  std::vector<std::string> warnings;
  const AttributedGraph g = load_graph(config, &warnings);
  double train_seconds = 0.0;
  const TrainedModel model = obtain_model(config, g, &train_seconds);
  const UnlearnRequest req = obtain_request(config, g);
  const OracleComparison cmp = compare_with_oracle(config, model, g, req);
  const auto& inf = cmp.influence;
  const Vector certified = add_gaussian_noise(inf.theta_bar, cmp.cert_assumed.sigma, config.noise_seed);

  const Objective original(g, model.spec);
  const Objective after(inf.graph_after, model.spec);

  Json report = report_header("evaluate", config);
  report["graph"] = graph_summary(g);
  report["model"] = model_summary(model, config.checkpoint.empty());
  report["request"] = to_json(req);
  report["unlearn"] = to_json(inf);
  report["retrain"] = to_json(cmp.retrained.stats);
  report["distances"] = to_json(cmp.distances);
  report["certificate"] = to_json(cmp.cert_assumed);
  report["certificate_measured"] = to_json(cmp.cert_measured);
  report["measured_constants"] = to_json(cmp.measured);
  report["assumptions_violated"] = cmp.assumptions_violated;
  report["bound_holds"] = cmp.cert_assumed.approx_distance_bound >= cmp.distances.tilde_bar;
  report["bound_holds_measured"] = cmp.cert_measured.approx_distance_bound >= cmp.distances.tilde_bar;

  EvalReport eval;
  eval.wall_times = {{"train", train_seconds}, {"unlearn", cmp.unlearn_seconds}, {"retrain", cmp.retrain_seconds}};
  Json f1 = Json::object();
  if (!inf.graph_after.test_nodes().empty()) {
    f1["theta_star"] = f1_micro(after, inf.theta_star);
    f1["theta_bar"] = f1_micro(after, inf.theta_bar);
    f1["certified"] = f1_micro(after, certified);
    f1["retrained"] = f1_micro(after, cmp.retrained.theta);
    eval.f1_micro = f1["certified"].get<double>();
  }
  report["f1_micro"] = std::move(f1);

  Json effectiveness = Json::object();
  if (!req.nodes.empty()) {
    const NodeSet test_set = g.test_nodes();
    const std::vector<NodeId> test(test_set.begin(), test_set.end());
    const std::vector<NodeId> removed(req.nodes.begin(), req.nodes.end());
    const std::size_t count = std::min(removed.size(), test.size());
    if (count > 0) {
      const NodeSet pos = NodeSet::from_unsorted(seeded_prefix(removed, count, config.sample_seed + 1));
      const NodeSet neg = NodeSet::from_unsorted(seeded_prefix(test, count, config.sample_seed + 2));
      effectiveness["mi_auc_theta_star"] = mi_proxy_auc(original, inf.theta_star, pos, neg);
      effectiveness["mi_auc_certified"] = mi_proxy_auc(original, certified, pos, neg);
      effectiveness["mi_auc_retrained"] = mi_proxy_auc(original, cmp.retrained.theta, pos, neg);
      effectiveness["pairs"] = count;
      eval.mi_auc = effectiveness["mi_auc_certified"].get<double>();
    }
  }
  if (!req.edges.empty()) {
    const auto negatives = sample_negative_edges(g, req.edges.size(), config.sample_seed + 3);
    effectiveness["edge_auc_theta_star"] = mi_proxy_auc_edges(original, inf.theta_star, req.edges, negatives);
    effectiveness["edge_auc_certified"] = mi_proxy_auc_edges(original, certified, req.edges, negatives);
    effectiveness["edge_auc_retrained"] = mi_proxy_auc_edges(original, cmp.retrained.theta, req.edges, negatives);
    eval.mi_auc = effectiveness["edge_auc_certified"].get<double>();
  }
  if (!req.attrs_full.empty() || !req.attrs_partial.empty()) {
    effectiveness["attr_loss_theta_star"] = attr_unlearn_loss(model.spec, inf.theta_star, g, req);
    effectiveness["attr_loss_certified"] = attr_unlearn_loss(model.spec, certified, g, req);
    effectiveness["attr_loss_retrained"] = attr_unlearn_loss(model.spec, cmp.retrained.theta, g, req);
    eval.attr_unlearn_loss = effectiveness["attr_loss_certified"].get<double>();
  }
  report["effectiveness"] = std::move(effectiveness);
  report["eval"] = to_json(eval);
  Json all_warnings = warnings;
  for (const auto& w : inf.warnings) all_warnings.push_back(w);
  report["warnings"] = std::move(all_warnings);

  PendingOutputs outputs(config.out);
  outputs.add("certified.bin", encode_checkpoint(with_theta(model, certified)));
  outputs.add("config.txt", config_to_text(config));
  return finish("evaluate", std::move(report), outputs, Json::object());
}

Json cmd_bench_bounds(const RunConfig& config) {
  std::vector<std::string> warnings;
  const AttributedGraph g = load_graph(config, &warnings);
  double train_seconds = 0.0;
  const TrainedModel model = obtain_model(config, g, &train_seconds);

  CsvTable csv;
  csv.header = {"ratio",          "delta_v",         "v_tilde",          "m",
                "actual_tilde_bar", "actual_star_tilde", "approx_bound_assumed", "optimal_bound_assumed",
                "approx_bound_measured", "optimal_bound_measured", "assumptions_violated", "holds_measured"};
  Json rows = Json::array();
  PlotSeries actual{"actual ||theta~ - theta_bar||", {}, {}, false};
  PlotSeries assumed{"bound (assumed constants)", {}, {}, true};
  PlotSeries measured{"bound (measured constants)", {}, {}, true};
  bool all_hold = true;
  std::size_t flagged = 0;
  for (double ratio : config.ratios) {
    const UnlearnRequest req =
        generate_request(g, config.request_type, ratio, config.attr_dims_ratio, config.sample_seed);
    const OracleComparison cmp = compare_with_oracle(config, model, g, req);
    const bool holds = cmp.cert_measured.approx_distance_bound >= cmp.distances.tilde_bar;
    all_hold = all_hold && holds;
    flagged += cmp.assumptions_violated ? 1 : 0;

    Json row;
    row["ratio"] = ratio;
    row["request"] = to_json(req);
    row["delta_v_size"] = cmp.influence.delta_v_size;
    row["v_tilde_size"] = cmp.influence.v_tilde.size();
    row["m"] = cmp.influence.m_used;
    row["distances"] = to_json(cmp.distances);
    row["certificate"] = to_json(cmp.cert_assumed);
    row["certificate_measured"] = to_json(cmp.cert_measured);
    row["measured_constants"] = to_json(cmp.measured);
    row["assumptions_violated"] = cmp.assumptions_violated;
    row["holds_measured"] = holds;
    row[kTimingKey] = {{"unlearn_seconds", cmp.unlearn_seconds}, {"retrain_seconds", cmp.retrain_seconds}};
    rows.push_back(std::move(row));

    csv.add_row({format_number(ratio), std::to_string(cmp.influence.delta_v_size),
                 std::to_string(cmp.influence.v_tilde.size()), std::to_string(cmp.influence.m_used),
                 format_number(cmp.distances.tilde_bar), format_number(cmp.distances.star_tilde),
                 format_number(cmp.cert_assumed.approx_distance_bound), format_number(cmp.cert_assumed.optimal_distance_bound),
                 format_number(cmp.cert_measured.approx_distance_bound), format_number(cmp.cert_measured.optimal_distance_bound),
                 cmp.assumptions_violated ? "true" : "false", holds ? "true" : "false"});
    for (PlotSeries* s : {&actual, &assumed, &measured}) s->x.push_back(100.0 * ratio);
    actual.y.push_back(cmp.distances.tilde_bar);
    assumed.y.push_back(cmp.cert_assumed.approx_distance_bound);
    measured.y.push_back(cmp.cert_measured.approx_distance_bound);
  }

  Json report = report_header("bench-bounds", config);
  report["graph"] = graph_summary(g);
  report["model"] = model_summary(model, config.checkpoint.empty());
  report["request_type"] = to_string(config.request_type);
  report["rows"] = std::move(rows);
  report["all_bounds_hold_measured"] = all_hold;
  report["runs_violating_assumed_constants"] = flagged;
  report["warnings"] = warnings;

  PendingOutputs outputs(config.out);
  outputs.add("bench-bounds.csv", csv.str());
  if (config.svg) {
    LinePlot plot{"Distance bound vs actual (" + std::string(to_string(config.request_type)) + ")",
                  "unlearn ratio (%)", "distance (log scale)", true, {actual, assumed, measured}};
    outputs.add("bench-bounds.svg", render_svg(plot));
  }
  outputs.add("config.txt", config_to_text(config));
  return finish("bench-bounds", std::move(report), outputs, {{"train_seconds", train_seconds}});
}

Json cmd_bench_time(const RunConfig& config) {
  std::vector<std::string> warnings;
  const AttributedGraph g = load_graph(config, &warnings);
  double train_seconds = 0.0;
  const TrainedModel model = obtain_model(config, g, &train_seconds);

  CsvTable csv;
  csv.header = {"ratio", "request_size", "unlearn_median_s", "retrain_median_s", "speedup"};
  Json rows = Json::array();
  PlotSeries unlearn_s{"unlearn", {}, {}, false};
  PlotSeries retrain_s{"retrain", {}, {}, true};
  bool faster_everywhere = true;
  for (double ratio : config.ratios) {
    const UnlearnRequest req =
        generate_request(g, config.request_type, ratio, config.attr_dims_ratio, config.sample_seed);
    std::vector<double> u, r;
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
      u.push_back(timed([&] { (void)unlearn(model, g, req, config.solver); }));
      r.push_back(timed([&] { (void)retrain(model, g, req, config.train); }));
    }
    const double um = median(u), rm = median(r);
    faster_everywhere = faster_everywhere && um < rm;
    const std::size_t size = req.nodes.size() + req.edges.size() + req.attrs_full.size() + req.attrs_partial.size();

    Json row;
    row["ratio"] = ratio;
    row["request_size"] = size;
    row[kTimingKey] = {{"unlearn_seconds", u},
                       {"retrain_seconds", r},
                       {"unlearn_median", um},
                       {"retrain_median", rm},
                       {"unlearn_faster", um < rm}};
    rows.push_back(std::move(row));
    csv.add_row({format_number(ratio), std::to_string(size), format_number(um), format_number(rm),
                 format_number(rm / std::max(um, 1e-12))});
    unlearn_s.x.push_back(100.0 * ratio);
    retrain_s.x.push_back(100.0 * ratio);
    unlearn_s.y.push_back(um);
    retrain_s.y.push_back(rm);
  }

  Json report = report_header("bench-time", config);
  report["graph"] = graph_summary(g);
  report["model"] = model_summary(model, config.checkpoint.empty());
  report["request_type"] = to_string(config.request_type);
  report["rows"] = std::move(rows);
  report["warnings"] = warnings;

  PendingOutputs outputs(config.out);
  outputs.add("bench-time.csv", csv.str());
  if (config.svg) {
    LinePlot plot{"Wall time: unlearn vs retrain", "unlearn ratio (%)", "seconds (log scale)", true,
                  {unlearn_s, retrain_s}};
    outputs.add("bench-time.svg", render_svg(plot));
  }
  outputs.add("config.txt", config_to_text(config));
  return finish("bench-time", std::move(report), outputs,
                {{"train_seconds", train_seconds}, {"unlearn_faster_at_every_ratio", faster_everywhere}});
}

Json cmd_gen_synthetic(const RunConfig& config) {
  const AttributedGraph g = gen_synthetic(config.synthetic, config.data_seed);
  Json report = report_header("gen-synthetic", config);
  report["graph"] = graph_summary(g);
  std::size_t cross = 0;
  for (const Edge& e : g.edges())
    if (g.label(e.u) != g.label(e.v)) ++cross;
  report["cross_class_edges"] = cross;
  report["dataset_files"] = Json::array({"nodes.tsv", "edges.tsv"});

  save_dataset(g, config.out);
  PendingOutputs outputs(config.out);
  outputs.add("config.txt", config_to_text(config));
  return finish("gen-synthetic", std::move(report), outputs, Json::object());
}

Json cmd_convert(const RunConfig& config, const ConvertArgs& args) {
  if (args.content.empty() || args.cites.empty())
    throw Error(ErrorCode::Config, "convert needs --content and --cites");
  const ConvertManifest manifest =
      convert_citation_dataset(args.content, args.cites, config.out, args.options);
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "convert";
  report["status"] = "ok";
  report["graph"] = {{"num_nodes", manifest.num_nodes},
                     {"raw_edge_rows", manifest.raw_edge_rows},
                     {"undirected_edges", manifest.undirected_edges},
                     {"dropped_edges", manifest.dropped_edges},
                     {"feature_dim", manifest.feature_dim},
                     {"num_classes", manifest.num_classes}};
  report["split"] = {{"train_fraction", args.options.train_fraction},
                     {"stratified", args.options.stratified},
                     {"seed", args.options.seed}};
  report["warnings"] = manifest.warnings;
  PendingOutputs outputs(config.out);
  return finish("convert", std::move(report), outputs, Json::object());
}

}  // namespace certun
