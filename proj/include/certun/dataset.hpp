#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "certun/graph.hpp"

namespace certun {

// Native dataset directory:
//   nodes.tsv  header "id<TAB>label<TAB>split<TAB>f0<TAB>...<TAB>f{d-1}", one row
//              per node, ids 0..n-1 in any order, split in {train, test, none},
//              label a class index in [0, c) with c = max label + 1 (or the
//              "# num_classes=<c>" comment line, when present before the header)
//   edges.tsv  header "src<TAB>dst", one undirected edge per row
// Files are UTF-8; blank lines and lines starting with '#' are skipped.

struct LoadResult {
  AttributedGraph graph;
  std::size_t edge_rows = 0;  // data rows in edges.tsv before deduplication
  std::vector<std::string> warnings;
};

/// Parses a native dataset directory. Malformed rows raise ErrorCode::Parse
/// naming file and line; dangling edge ids raise ErrorCode::InvalidEdge.
LoadResult load_dataset(const std::filesystem::path& dir);

/// Writes g in the native format; features use 17 significant digits so
/// that loading reproduces them exactly.
void save_dataset(const AttributedGraph& g, const std::filesystem::path& dir);

struct ConvertOptions {
  double train_fraction = 0.9;
  bool stratified = true;
  std::uint64_t seed = 0;
};

struct ConvertManifest {
  std::size_t num_nodes = 0;
  std::size_t raw_edge_rows = 0;
  std::size_t undirected_edges = 0;
  std::size_t dropped_edges = 0;  // self-loops and rows naming unknown ids
  std::size_t feature_dim = 0;
  std::size_t num_classes = 0;
  std::vector<std::string> class_names;
  ConvertOptions options;
  std::vector<std::string> warnings;
};

/// Converts a citation dataset in the common "content + cites" layout into
/// the native format:
///   content: <paper id> <f0> ... <f{d-1}> <class name>   (whitespace separated)
///   cites:   <cited id> <citing id>
/// Citations are symmetrized; the split is a seeded (stratified by default)
/// train/test split. Writes nodes.tsv, edges.tsv and manifest.json.
ConvertManifest convert_citation_dataset(const std::filesystem::path& content,
                                         const std::filesystem::path& cites,
                                         const std::filesystem::path& out_dir,
                                         const ConvertOptions& options);

}  // namespace certun
