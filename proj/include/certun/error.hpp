#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace certun {

enum class ErrorCode {
  InvalidNode,
  InvalidAttribute,
  InvalidEdge,
  Config,
  Parse,
  Validation,
  Numeric,
  Divergence,
  Solver,
  Io,
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidNode: return "invalid_node";
    case ErrorCode::InvalidAttribute: return "invalid_attribute";
    case ErrorCode::InvalidEdge: return "invalid_edge";
    case ErrorCode::Config: return "config";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Solver: return "solver";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Every failure the library reports is one of these; the CLI turns the
/// code and message into its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Configuration failure carrying every problem found, not just the first.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> problems)
      : Error(ErrorCode::Config, what), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace certun
