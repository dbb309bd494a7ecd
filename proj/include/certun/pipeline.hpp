#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "certun/config.hpp"
#include "certun/dataset.hpp"
#include "certun/oracle.hpp"
#include "certun/report.hpp"

namespace certun {

/// Files a command produces, written together once the command succeeded
/// so that a failure leaves no partial outputs behind.
class PendingOutputs {
 public:
  explicit PendingOutputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string bytes);
  void add_json(const std::string& name, const Json& doc);
  std::vector<std::string> names() const;
  void flush() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

/// The dataset directory when configured, otherwise the synthetic graph.
AttributedGraph load_graph(const RunConfig& config, std::vector<std::string>* warnings = nullptr);

/// Loads the configured checkpoint (checking it fits g) or trains afresh.
TrainedModel obtain_model(const RunConfig& config, const AttributedGraph& g, double* train_seconds = nullptr);

/// Loads the configured request file or generates one.
UnlearnRequest obtain_request(const RunConfig& config, const AttributedGraph& g);

/// Everything measured for one request against the retraining oracle.
struct OracleComparison {
  InfluenceResult influence;
  TrainedModel retrained;
  ParameterDistances distances;
  EmpiricalConstants measured;
  CertificateReport cert_assumed;   // configured constants
  CertificateReport cert_measured;  // measured surrogates
  bool assumptions_violated = false;
  double unlearn_seconds = 0.0;
  double retrain_seconds = 0.0;
};

OracleComparison compare_with_oracle(const RunConfig& config, const TrainedModel& model,
                                     const AttributedGraph& g, const UnlearnRequest& req);

// One function per CLI subcommand. Each returns the report it wrote to
// <out>/<command>.json; errors propagate as certun::Error.
Json cmd_train(const RunConfig& config);
Json cmd_unlearn(const RunConfig& config);
Json cmd_retrain(const RunConfig& config);
Json cmd_certify(const RunConfig& config);
Json cmd_evaluate(const RunConfig& config);
Json cmd_bench_bounds(const RunConfig& config);
Json cmd_bench_time(const RunConfig& config);
Json cmd_gen_synthetic(const RunConfig& config);

struct ConvertArgs {
  std::string content;
  std::string cites;
  ConvertOptions options;
};

Json cmd_convert(const RunConfig& config, const ConvertArgs& args);

}  // namespace certun
