#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "certun/certification.hpp"
#include "certun/config.hpp"
#include "certun/evaluation.hpp"
#include "certun/influence.hpp"
#include "certun/oracle.hpp"

namespace certun {

using Json = nlohmann::ordered_json;

/// Version of every JSON report the CLI writes.
inline constexpr int kSchemaVersion = 1;

/// Wall-clock fields live under this key at any depth; strip_timing
/// removes them for determinism comparisons.
inline constexpr const char* kTimingKey = "timing";

Json to_json(const PassDiagnostics& d);
/// Diagnostics of an unlearn call; parameter vectors are omitted.
Json to_json(const InfluenceResult& r);
Json to_json(const CertificateReport& c);
Json to_json(const AssumptionConstants& c);
Json to_json(const EmpiricalConstants& c);
Json to_json(const ParameterDistances& d);
Json to_json(const TrainStats& s);
Json to_json(const EvalReport& e);
Json to_json(const UnlearnRequest& r);
Json config_echo(const RunConfig& config);

/// Error document: {"schema_version", "status": "error", "error": {code, message, details}}.
Json error_json(std::string_view code, const std::string& message,
                const std::vector<std::string>& details = {});

/// Copy of `doc` with every "timing" member removed.
Json strip_timing(const Json& doc);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

/// Shortest decimal text that parses back to `v`.
std::string format_number(double v);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string render_svg(const LinePlot& plot);

}  // namespace certun
