#include "certun/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "certun/error.hpp"
#include "certun/rng.hpp"

namespace certun {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

[[noreturn]] void parse_error(const fs::path& file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

template <class T>
T parse_int(const std::string& s, const fs::path& file, std::size_t line, const char* field) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end)
    parse_error(file, line, std::string("bad ") + field + " '" + s + "'");
  return value;
}

double parse_double(const std::string& s, const fs::path& file, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  parse_error(file, line, "bad feature value '" + s + "'");
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

LoadResult load_dataset(const fs::path& dir) {
  const fs::path nodes_path = dir / "nodes.tsv";
  const fs::path edges_path = dir / "edges.tsv";
  if (!fs::exists(nodes_path)) throw Error(ErrorCode::Io, "missing " + nodes_path.string());
  if (!fs::exists(edges_path)) throw Error(ErrorCode::Io, "missing " + edges_path.string());

  GraphData data;
  std::size_t declared_classes = 0;
  {
    auto in = open_input(nodes_path);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    struct Row {
      std::int32_t label;
      std::uint8_t train, test;
      std::vector<double> features;
    };
    std::map<std::size_t, Row> rows;
    while (std::getline(in, line)) {
      ++lineno;
      strip_cr(line);
      if (line.empty()) continue;
      if (line[0] == '#') {
        const std::string key = "# num_classes=";
        if (line.rfind(key, 0) == 0)
          declared_classes = parse_int<std::size_t>(line.substr(key.size()), nodes_path, lineno,
                                                    "num_classes");
        continue;
      }
      const auto fields = split_tabs(line);
      if (!header_seen) {
        if (fields.size() < 3 || fields[0] != "id" || fields[1] != "label" || fields[2] != "split")
          parse_error(nodes_path, lineno, "expected header 'id<TAB>label<TAB>split<TAB>f0...'");
        for (std::size_t j = 3; j < fields.size(); ++j)
          if (fields[j] != "f" + std::to_string(j - 3))
            parse_error(nodes_path, lineno, "feature column " + std::to_string(j - 3) +
                                                " should be named f" + std::to_string(j - 3));
        data.feature_dim = fields.size() - 3;
        header_seen = true;
        continue;
      }
      if (fields.size() != data.feature_dim + 3)
        parse_error(nodes_path, lineno, "expected " + std::to_string(data.feature_dim + 3) +
                                            " columns, found " + std::to_string(fields.size()));
      const auto id = parse_int<std::size_t>(fields[0], nodes_path, lineno, "id");
      Row row;
      row.label = parse_int<std::int32_t>(fields[1], nodes_path, lineno, "label");
      if (row.label < -1) parse_error(nodes_path, lineno, "label must be >= -1");
      const std::string& split = fields[2];
      if (split == "train") {
        row.train = 1, row.test = 0;
      } else if (split == "test") {
        row.train = 0, row.test = 1;
      } else if (split == "none") {
        row.train = 0, row.test = 0;
      } else {
        parse_error(nodes_path, lineno, "split must be train, test or none, found '" + split + "'");
      }
      if (row.label < 0 && split != "none")
        parse_error(nodes_path, lineno, "unlabeled node must have split 'none'");
      row.features.reserve(data.feature_dim);
      for (std::size_t j = 3; j < fields.size(); ++j)
        row.features.push_back(parse_double(fields[j], nodes_path, lineno));
      if (!rows.emplace(id, std::move(row)).second)
        parse_error(nodes_path, lineno, "duplicate node id " + std::to_string(id));
    }
    if (!header_seen) parse_error(nodes_path, lineno, "missing header");
    if (!rows.empty() && rows.rbegin()->first != rows.size() - 1)
      throw Error(ErrorCode::Parse, "nodes.tsv: node ids must be exactly 0.." +
                                        std::to_string(rows.size() - 1));

    data.num_nodes = rows.size();
    data.features = Matrix(data.num_nodes, data.feature_dim);
    data.labels.resize(data.num_nodes);
    data.train_mask.resize(data.num_nodes);
    data.test_mask.resize(data.num_nodes);
    std::int32_t max_label = -1;
    for (auto& [id, row] : rows) {
      data.labels[id] = row.label;
      data.train_mask[id] = row.train;
      data.test_mask[id] = row.test;
      std::copy(row.features.begin(), row.features.end(), data.features.row(id).begin());
      max_label = std::max(max_label, row.label);
    }
    const auto observed = static_cast<std::size_t>(max_label + 1);
    if (declared_classes != 0 && declared_classes < observed)
      throw Error(ErrorCode::Parse, "nodes.tsv: num_classes=" + std::to_string(declared_classes) +
                                        " but labels reach " + std::to_string(max_label));
    data.num_classes = std::max(declared_classes, observed);
  }

  LoadResult result;
  {
    auto in = open_input(edges_path);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++lineno;
      strip_cr(line);
      if (line.empty() || line[0] == '#') continue;
      const auto fields = split_tabs(line);
      if (!header_seen) {
        if (fields.size() != 2 || fields[0] != "src" || fields[1] != "dst")
          parse_error(edges_path, lineno, "expected header 'src<TAB>dst'");
        header_seen = true;
        continue;
      }
      if (fields.size() != 2)
        parse_error(edges_path, lineno, "expected 2 columns, found " + std::to_string(fields.size()));
      const auto u = parse_int<NodeId>(fields[0], edges_path, lineno, "src");
      const auto v = parse_int<NodeId>(fields[1], edges_path, lineno, "dst");
      if (u >= data.num_nodes || v >= data.num_nodes)
        throw Error(ErrorCode::InvalidEdge, "edges.tsv:" + std::to_string(lineno) + ": edge (" +
                                                std::to_string(u) + ", " + std::to_string(v) +
                                                ") names a node that does not exist");
      data.edges.push_back({u, v});
      ++result.edge_rows;
    }
    if (!header_seen) parse_error(edges_path, lineno, "missing header");
  }
  result.graph = AttributedGraph::build(std::move(data), &result.warnings);
  return result;
}

void save_dataset(const AttributedGraph& g, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "nodes.tsv");
    out << "# num_classes=" << g.num_classes() << "\n";
    out << "id\tlabel\tsplit";
    for (std::size_t j = 0; j < g.feature_dim(); ++j) out << "\tf" << j;
    out << "\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      out << v << '\t' << g.label(v) << '\t'
          << (g.is_train(v) ? "train" : g.is_test(v) ? "test" : "none");
      for (double x : g.feature_row(v)) out << '\t' << format_double(x);
      out << "\n";
    }
  }
  auto out = open_output(dir / "edges.tsv");
  out << "src\tdst\n";
  for (const Edge& e : g.edges()) out << e.u << '\t' << e.v << "\n";
}

ConvertManifest convert_citation_dataset(const fs::path& content, const fs::path& cites,
                                         const fs::path& out_dir, const ConvertOptions& options) {
  if (!(options.train_fraction > 0.0 && options.train_fraction <= 1.0))
    throw Error(ErrorCode::Config, "train_fraction must be in (0, 1]");

  ConvertManifest manifest;
  manifest.options = options;

  std::unordered_map<std::string, NodeId> ids;
  std::map<std::string, std::int32_t> class_index;
  std::vector<std::string> class_of;
  std::vector<std::vector<double>> rows;
  {
    auto in = open_input(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      strip_cr(line);
      const auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok.size() < 2) parse_error(content, lineno, "expected id, features and class");
      const std::size_t d = tok.size() - 2;
      if (rows.empty()) manifest.feature_dim = d;
      if (d != manifest.feature_dim)
        parse_error(content, lineno, "expected " + std::to_string(manifest.feature_dim) +
                                         " features, found " + std::to_string(d));
      if (!ids.emplace(tok[0], static_cast<NodeId>(rows.size())).second)
        parse_error(content, lineno, "duplicate paper id '" + tok[0] + "'");
      std::vector<double> f(d);
      for (std::size_t j = 0; j < d; ++j) f[j] = parse_double(tok[j + 1], content, lineno);
      rows.push_back(std::move(f));
      class_of.push_back(tok.back());
      class_index.emplace(tok.back(), 0);
    }
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, content.filename().string() + ": no nodes");
  {
    std::int32_t next = 0;
    for (auto& [name, idx] : class_index) {
      idx = next++;
      manifest.class_names.push_back(name);
    }
  }

  GraphData data;
  data.num_nodes = rows.size();
  data.feature_dim = manifest.feature_dim;
  data.num_classes = class_index.size();
  data.features = Matrix(data.num_nodes, data.feature_dim);
  data.labels.resize(data.num_nodes);
  for (std::size_t v = 0; v < rows.size(); ++v) {
    std::copy(rows[v].begin(), rows[v].end(), data.features.row(v).begin());
    data.labels[v] = class_index.at(class_of[v]);
  }

  {
    auto in = open_input(cites);
    std::string line;
    std::size_t lineno = 0;
    std::size_t unknown = 0, loops = 0;
    while (std::getline(in, line)) {
      ++lineno;
      strip_cr(line);
      const auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok.size() != 2) parse_error(cites, lineno, "expected two paper ids");
      ++manifest.raw_edge_rows;
      const auto a = ids.find(tok[0]);
      const auto b = ids.find(tok[1]);
      if (a == ids.end() || b == ids.end()) {
        ++unknown;
        continue;
      }
      if (a->second == b->second) {
        ++loops;
        continue;
      }
      data.edges.push_back({a->second, b->second});
    }
    manifest.dropped_edges = unknown + loops;
    if (unknown) manifest.warnings.push_back(std::to_string(unknown) + " citations name unknown papers and were dropped");
    if (loops) manifest.warnings.push_back(std::to_string(loops) + " self-citations were dropped");
  }

  // Seeded split: shuffle once, then take the first train_fraction of each
  // class (stratified) or of all nodes.
  std::vector<NodeId> order(data.num_nodes);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(options.seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  data.train_mask.assign(data.num_nodes, 0);
  data.test_mask.assign(data.num_nodes, 0);
  if (options.stratified) {
    std::vector<std::vector<NodeId>> by_class(data.num_classes);
    for (NodeId v : order) by_class[static_cast<std::size_t>(data.labels[v])].push_back(v);
    for (const auto& members : by_class) {
      const auto n_train = static_cast<std::size_t>(options.train_fraction * members.size() + 0.5);
      for (std::size_t i = 0; i < members.size(); ++i)
        (i < n_train ? data.train_mask : data.test_mask)[members[i]] = 1;
    }
  } else {
    const auto n_train = static_cast<std::size_t>(options.train_fraction * order.size() + 0.5);
    for (std::size_t i = 0; i < order.size(); ++i)
      (i < n_train ? data.train_mask : data.test_mask)[order[i]] = 1;
  }

  std::vector<std::string> build_warnings;
  const AttributedGraph g = AttributedGraph::build(std::move(data), &build_warnings);
  for (auto& w : build_warnings) manifest.warnings.push_back(std::move(w));
  manifest.num_nodes = g.num_nodes();
  manifest.undirected_edges = g.num_edges();
  manifest.num_classes = g.num_classes();
  save_dataset(g, out_dir);

  nlohmann::json j;
  j["source_content"] = content.string();
  j["source_cites"] = cites.string();
  j["num_nodes"] = manifest.num_nodes;
  j["raw_edge_rows"] = manifest.raw_edge_rows;
  j["undirected_edges"] = manifest.undirected_edges;
  j["dropped_edges"] = manifest.dropped_edges;
  j["feature_dim"] = manifest.feature_dim;
  j["num_classes"] = manifest.num_classes;
  j["class_names"] = manifest.class_names;
  j["split"] = {{"train_fraction", options.train_fraction},
                {"stratified", options.stratified},
                {"seed", options.seed}};
  j["warnings"] = manifest.warnings;
  auto out = open_output(out_dir / "manifest.json");
  out << j.dump(2) << "\n";
  return manifest;
}

}  // namespace certun
