#include "certun/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "certun/error.hpp"
#include "certun/rng.hpp"

namespace certun {

std::string_view to_string(RequestType type) {
  switch (type) {
    case RequestType::Node: return "node";
    case RequestType::Edge: return "edge";
    case RequestType::AttrFull: return "attr_full";
    case RequestType::AttrPartial: return "attr_partial";
  }
  return "node";
}

RequestType parse_request_type(std::string_view text) {
  if (text == "node" || text == "nodes") return RequestType::Node;
  if (text == "edge" || text == "edges") return RequestType::Edge;
  if (text == "attr_full" || text == "feature") return RequestType::AttrFull;
  if (text == "attr_partial" || text == "partial_feature") return RequestType::AttrPartial;
  throw Error(ErrorCode::Config, "unknown request type '" + std::string(text) +
                                     "' (expected node, edge, attr_full or attr_partial)");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

template <class T>
T to_unsigned(const std::string& s) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<double> to_list(std::string s) {
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unterminated list '" + s + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) out.push_back(to_double(trim(item)));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
std::string fmt_int(T v) {
  return std::to_string(v);
}

struct Field {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define CERTUN_DOUBLE(key, member, text)                                              \
  Field {                                                                             \
    key, text, [](RunConfig& c, const std::string& v) { c.member = to_double(v); },   \
        [](const RunConfig& c) { return fmt(c.member); }                              \
  }
#define CERTUN_SIZE(key, member, text)                                                        \
  Field {                                                                                     \
    key, text,                                                                                \
        [](RunConfig& c, const std::string& v) { c.member = to_unsigned<std::size_t>(v); },   \
        [](const RunConfig& c) { return fmt_int(c.member); }                                  \
  }
#define CERTUN_SEED(key, member, text)                                                          \
  Field {                                                                                       \
    key, text,                                                                                  \
        [](RunConfig& c, const std::string& v) { c.member = to_unsigned<std::uint64_t>(v); },   \
        [](const RunConfig& c) { return fmt_int(c.member); }                                    \
  }
#define CERTUN_STRING(key, member, text)                                     \
  Field {                                                                    \
    key, text, [](RunConfig& c, const std::string& v) { c.member = v; },     \
        [](const RunConfig& c) { return c.member; }                          \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      CERTUN_STRING("dataset", dataset, "native dataset directory (synthetic graph when empty)"),
      CERTUN_SIZE("syn_nodes", synthetic.num_nodes, "synthetic: number of nodes"),
      CERTUN_SIZE("syn_classes", synthetic.num_classes, "synthetic: number of classes"),
      CERTUN_DOUBLE("syn_p_intra", synthetic.p_intra, "synthetic: within-class edge probability"),
      CERTUN_DOUBLE("syn_p_inter", synthetic.p_inter, "synthetic: cross-class edge probability"),
      CERTUN_SIZE("syn_feature_dim", synthetic.feature_dim, "synthetic: feature dimension"),
      CERTUN_DOUBLE("syn_separation", synthetic.separation, "synthetic: class-mean norm"),
      CERTUN_DOUBLE("syn_noise", synthetic.noise, "synthetic: feature noise standard deviation"),
      CERTUN_DOUBLE("syn_train_fraction", synthetic.train_fraction, "synthetic: train split fraction"),
      CERTUN_SEED("data_seed", data_seed, "seed of the synthetic generator"),
      Field{"model", "sgc or gcn2",
            [](RunConfig& c, const std::string& v) { c.model.kind = parse_model_kind(v); },
            [](const RunConfig& c) { return std::string(to_string(c.model.kind)); }},
      Field{"k", "propagation depth",
            [](RunConfig& c, const std::string& v) { c.model.k = to_int(v); },
            [](const RunConfig& c) { return fmt_int(c.model.k); }},
      CERTUN_DOUBLE("reg_lambda", model.reg_lambda, "L2 coefficient"),
      CERTUN_SIZE("hidden", model.hidden, "gcn2 hidden width"),
      CERTUN_DOUBLE("train_tol", train.tol, "trainer gradient-norm tolerance"),
      CERTUN_SIZE("train_max_iters", train.max_iters, "trainer iteration cap"),
      Field{"solver", "auto, direct, cg or stochastic",
            [](RunConfig& c, const std::string& v) { c.solver.kind = parse_solver_kind(v); },
            [](const RunConfig& c) { return std::string(to_string(c.solver.kind)); }},
      CERTUN_SIZE("direct_ceiling", solver.direct_ceiling, "auto uses direct up to this many parameters"),
      CERTUN_DOUBLE("cg_tol", solver.cg_tol, "conjugate-gradient relative tolerance"),
      CERTUN_SIZE("cg_max_iters", solver.cg_max_iters, "conjugate-gradient iteration cap"),
      CERTUN_SIZE("stochastic_t", solver.stochastic_iters, "stochastic estimation recursion depth"),
      CERTUN_DOUBLE("stochastic_scale", solver.stochastic_scale,
                    "stochastic estimation scale (<= 0: automatic)"),
      CERTUN_DOUBLE("damp", solver.damp, "stochastic estimation damping"),
      CERTUN_DOUBLE("lipschitz_L", constants.lipschitz_L, "assumed Lipschitz constant"),
      CERTUN_DOUBLE("convexity_lambda", constants.convexity_lambda, "assumed strong convexity"),
      CERTUN_DOUBLE("loss_bound_C", constants.loss_bound_C, "assumed per-node loss bound"),
      CERTUN_DOUBLE("epsilon", epsilon, "privacy epsilon"),
      CERTUN_DOUBLE("delta", delta, "privacy delta"),
      CERTUN_SEED("train_seed", train_seed, "seed of parameter initialization"),
      CERTUN_SEED("noise_seed", noise_seed, "seed of the certification noise"),
      CERTUN_SEED("sample_seed", sample_seed, "seed of request generation and sampling"),
      CERTUN_STRING("request", request, "request JSON file (generated when empty)"),
      Field{"request_type", "node, edge, attr_full or attr_partial",
            [](RunConfig& c, const std::string& v) { c.request_type = parse_request_type(v); },
            [](const RunConfig& c) { return std::string(to_string(c.request_type)); }},
      CERTUN_DOUBLE("request_ratio", request_ratio, "fraction of candidates to unlearn"),
      CERTUN_DOUBLE("attr_dims_ratio", attr_dims_ratio, "fraction of dims per node (attr_partial)"),
      CERTUN_STRING("checkpoint", checkpoint, "trained model checkpoint (trained afresh when empty)"),
      CERTUN_STRING("out", out, "output directory"),
      Field{"svg", "write SVG plots",
            [](RunConfig& c, const std::string& v) { c.svg = to_bool(v); },
            [](const RunConfig& c) { return std::string(c.svg ? "true" : "false"); }},
      Field{"ratios", "comma-separated unlearn ratios for bench-* sweeps",
            [](RunConfig& c, const std::string& v) { c.ratios = to_list(v); },
            [](const RunConfig& c) {
              std::string s = "[";
              for (std::size_t i = 0; i < c.ratios.size(); ++i)
                s += (i ? ", " : "") + fmt(c.ratios[i]);
              return s + "]";
            }},
      CERTUN_SIZE("repeats", repeats, "timing repetitions per ratio in bench-time"),
      Field{"threads", "OpenMP threads (0: runtime default)",
            [](RunConfig& c, const std::string& v) { c.threads = to_int(v); },
            [](const RunConfig& c) { return fmt_int(c.threads); }},
  };
  return table;
}

#undef CERTUN_DOUBLE
#undef CERTUN_SIZE
#undef CERTUN_SEED
#undef CERTUN_STRING

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (f.name == key) return &f;
  return nullptr;
}

std::string env_name(const std::string& key) {
  std::string out = kEnvPrefix;
  for (char ch : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& f : fields()) out.push_back({f.name, f.help});
    return out;
  }();
  return keys;
}

std::vector<ConfigAssignment> parse_config_text(const std::string& text, const std::string& source) {
  std::vector<ConfigAssignment> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    // Comments start at a '#' outside double quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Parse, where + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::Parse, where + ": missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    else if (!value.empty() && value.front() == '"')
      throw Error(ErrorCode::Parse, where + ": unterminated string");
    out.push_back({key, value, where});
  }
  return out;
}

std::vector<ConfigAssignment> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::vector<ConfigAssignment> read_config_env() {
  std::vector<ConfigAssignment> out;
  for (const auto& f : fields()) {
    const std::string name = env_name(f.name);
    if (const char* value = std::getenv(name.c_str())) out.push_back({f.name, value, "env " + name});
  }
  return out;
}

std::vector<std::string> check_config(const RunConfig& c, bool require_files) {
  namespace fs = std::filesystem;
  std::vector<std::string> problems;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  if (c.dataset.empty()) {
    try {
      c.synthetic.check();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  } else if (require_files) {
    need(fs::is_directory(c.dataset), "dataset directory '" + c.dataset + "' does not exist");
  }
  need(c.model.k >= 1, "k must be >= 1");
  need(c.model.reg_lambda >= 0.0, "reg_lambda must be >= 0");
  need(c.model.kind != ModelKind::Sgc || c.model.reg_lambda > 0.0,
       "reg_lambda must be > 0 for sgc (strong convexity)");
  need(c.model.kind != ModelKind::Gcn2 || c.model.hidden >= 1, "hidden must be >= 1");
  need(c.train.tol > 0.0, "train_tol must be > 0");
  need(c.train.max_iters >= 1, "train_max_iters must be >= 1");
  need(c.solver.cg_tol > 0.0, "cg_tol must be > 0");
  need(c.solver.cg_max_iters >= 1, "cg_max_iters must be >= 1");
  need(c.solver.stochastic_iters >= 1, "stochastic_t must be >= 1");
  need(c.solver.damp >= 0.0, "damp must be >= 0");
  need(c.constants.lipschitz_L > 0.0, "lipschitz_L must be > 0");
  need(c.constants.convexity_lambda > 0.0, "convexity_lambda must be > 0");
  need(c.constants.loss_bound_C > 0.0, "loss_bound_C must be > 0");
  need(c.epsilon > 0.0, "epsilon must be > 0");
  need(c.delta > 0.0 && c.delta < 1.0, "delta must be in (0, 1)");
  need(c.request_ratio > 0.0 && c.request_ratio <= 1.0, "request_ratio must be in (0, 1]");
  need(c.attr_dims_ratio > 0.0 && c.attr_dims_ratio < 1.0, "attr_dims_ratio must be in (0, 1)");
  need(!c.ratios.empty(), "ratios must not be empty");
  for (double r : c.ratios)
    need(r > 0.0 && r <= 1.0, "ratio " + fmt(r) + " is not in (0, 1]");
  need(c.repeats >= 1, "repeats must be >= 1");
  need(c.threads >= 0, "threads must be >= 0");
  need(!c.out.empty(), "out must not be empty");
  if (require_files) {
    if (!c.request.empty())
      need(fs::is_regular_file(c.request), "request file '" + c.request + "' does not exist");
    if (!c.checkpoint.empty())
      need(fs::is_regular_file(c.checkpoint), "checkpoint '" + c.checkpoint + "' does not exist");
  }
  return problems;
}

RunConfig build_config(const std::vector<ConfigAssignment>& assignments, bool require_files) {
  RunConfig config;
  std::vector<std::string> problems;
  for (const auto& a : assignments) {
    const Field* f = find_field(a.key);
    if (!f) {
      problems.push_back(a.origin + ": unknown key '" + a.key + "'");
      continue;
    }
    try {
      f->set(config, a.value);
    } catch (const std::exception& e) {
      problems.push_back(a.origin + ": " + a.key + ": " + e.what());
    }
  }
  for (auto& p : check_config(config, require_files)) problems.push_back(std::move(p));
  if (!problems.empty()) {
    std::string msg = "invalid configuration (" + std::to_string(problems.size()) + " problems)";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg, problems);
  }
  return config;
}

std::string config_to_text(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    std::string value = f.get(config);
    const bool is_list = f.name == "ratios";
    const bool is_string = !is_list && (value.empty() || value.find_first_of(" #\"=") != std::string::npos ||
                                        f.name == "dataset" || f.name == "request" ||
                                        f.name == "checkpoint" || f.name == "out");
    out += f.name + " = " + (is_string ? "\"" + value + "\"" : value) + "\n";
  }
  return out;
}

std::map<std::string, std::string> config_values(const RunConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out[f.name] = f.get(config);
  return out;
}

namespace {

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

std::size_t take_count(double ratio, std::size_t available) {
  const auto n = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(available)));
  return std::clamp<std::size_t>(n, 1, available);
}

}  // namespace

UnlearnRequest generate_request(const AttributedGraph& g, RequestType type, double ratio,
                                double attr_dims_ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw Error(ErrorCode::Config, "ratio must be in (0, 1]");
  Rng rng(seed);
  UnlearnRequest req;
  if (type == RequestType::Edge) {
    std::vector<Edge> edges = g.edges();
    if (edges.empty()) throw Error(ErrorCode::Config, "graph has no edges to unlearn");
    shuffle(edges, rng);
    edges.resize(take_count(ratio, edges.size()));
    req.edges = std::move(edges);
    req.normalize();
    return req;
  }
  const auto train = g.train_nodes();
  std::vector<NodeId> nodes(train.begin(), train.end());
  if (nodes.empty()) throw Error(ErrorCode::Config, "graph has no training nodes to unlearn");
  shuffle(nodes, rng);
  nodes.resize(take_count(ratio, nodes.size()));
  switch (type) {
    case RequestType::Node:
      req.nodes = NodeSet::from_unsorted(std::move(nodes));
      break;
    case RequestType::AttrFull:
      req.attrs_full = NodeSet::from_unsorted(std::move(nodes));
      break;
    case RequestType::AttrPartial: {
      const std::size_t d = g.feature_dim();
      if (d < 2) throw Error(ErrorCode::Config, "partial attribute requests need feature_dim >= 2");
      const auto count = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::llround(attr_dims_ratio * static_cast<double>(d))), 1, d - 1);
      // Dims are drawn per node after the node permutation, in sorted node
      // order, so the result does not depend on the node ratio's ordering.
      std::sort(nodes.begin(), nodes.end());
      Rng dim_rng(seed ^ 0x9e3779b97f4a7c15ULL);
      for (NodeId v : nodes) {
        std::vector<std::size_t> dims(d);
        std::iota(dims.begin(), dims.end(), std::size_t{0});
        shuffle(dims, dim_rng);
        dims.resize(count);
        std::sort(dims.begin(), dims.end());
        req.attrs_partial.push_back({v, std::move(dims)});
      }
      break;
    }
    case RequestType::Edge:
      break;
  }
  req.normalize();
  return req;
}

}  // namespace certun
