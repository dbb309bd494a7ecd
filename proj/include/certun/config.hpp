#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "certun/certification.hpp"
#include "certun/influence.hpp"
#include "certun/model.hpp"
#include "certun/request.hpp"
#include "certun/synthetic.hpp"

namespace certun {

/// Environment variables CERTUN_<KEY> (key upper-cased) override the
/// config file; command-line flags override both.
inline constexpr const char* kEnvPrefix = "CERTUN_";

enum class RequestType { Node, Edge, AttrFull, AttrPartial };

std::string_view to_string(RequestType type);
RequestType parse_request_type(std::string_view text);

/// Every setting of one CLI run. All seeds are explicit.
struct RunConfig {
  // data: a native dataset directory, or the synthetic generator when empty
  std::string dataset;
  SyntheticSpec synthetic;
  std::uint64_t data_seed = 0;

  ModelSpec model;
  TrainOptions train;
  SolverOptions solver;
  AssumptionConstants constants;
  double epsilon = 1.0;
  double delta = 0.01;

  std::uint64_t train_seed = 0;
  std::uint64_t noise_seed = 1;
  std::uint64_t sample_seed = 2;

  // request: a JSON file, or generated from type + ratio when empty
  std::string request;
  RequestType request_type = RequestType::Node;
  double request_ratio = 0.05;
  double attr_dims_ratio = 0.2;

  std::string checkpoint;  // trained model to start from; trained afresh when empty
  std::string out = "out";
  bool svg = true;

  std::vector<double> ratios{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
  std::size_t repeats = 3;  // timing repetitions in bench-time
  int threads = 0;          // OpenMP threads; 0 keeps the runtime default
};

struct ConfigKey {
  std::string name;
  std::string help;
};

/// All recognized keys, in the order they are written back.
const std::vector<ConfigKey>& config_keys();

/// Assignments collected from one source, with where they came from.
struct ConfigAssignment {
  std::string key;
  std::string value;
  std::string origin;  // e.g. "run.cfg:12", "env CERTUN_K", "--k"
};

/// Parses `key = value` lines. '#' starts a comment; values may be wrapped
/// in double quotes. Throws ErrorCode::Parse on malformed lines.
std::vector<ConfigAssignment> parse_config_text(const std::string& text, const std::string& source);

std::vector<ConfigAssignment> read_config_file(const std::string& path);

/// CERTUN_<KEY> variables present in the environment.
std::vector<ConfigAssignment> read_config_env();

/// Applies assignments in order, then checks the result. Every unknown
/// key, malformed value and violated invariant is collected; when any is
/// found, throws ErrorCode::Config listing all of them.
RunConfig build_config(const std::vector<ConfigAssignment>& assignments,
                       bool require_files = true);

/// Invariant violations of a config (empty when valid).
std::vector<std::string> check_config(const RunConfig& config, bool require_files = true);

/// The config as `key = value` text that parses back to the same config.
std::string config_to_text(const RunConfig& config);

/// Key/value pairs of the config, for report echoes.
std::map<std::string, std::string> config_values(const RunConfig& config);

/// Generates a request of the given type covering `ratio` of the candidate
/// entities (training nodes, or edges for RequestType::Edge), at least one.
/// Candidates are taken in the order of a permutation seeded by `seed`, so
/// requests for growing ratios with the same seed are nested.
UnlearnRequest generate_request(const AttributedGraph& g, RequestType type, double ratio,
                                double attr_dims_ratio, std::uint64_t seed);

}  // namespace certun
