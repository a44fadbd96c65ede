#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadham/phase_space.hpp"
#include "quadham/tolerances.hpp"

namespace quadham::cli {

inline constexpr const char* kToolName = "quadham";
inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kComputationError = 3 };

/// Thrown for anything wrong with the configuration or the command line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process-level inputs that do not come from argv.
struct Environment {
  /// Raw value of QUADHAM_TOL_SCALE, if set.
  std::optional<std::string> tolerance_scale;
  /// Timestamp written into the report envelope.
  std::string timestamp = "1970-01-01T00:00:00Z";
};

struct Options {
  int max_quanta = 3;
  std::optional<int> n_max;  // unset: 8 for shell-preserving forms, else 20
  std::string format;  // empty: command default
  double tolerance_scale = 1.0;
  std::optional<double> from;
  std::optional<double> to;
  int steps = 81;
  int m = 0;
  int n = 0;
  std::optional<std::uint64_t> seed;
};

/// Parsed configuration file: the model block and the options block.
struct AnalysisConfig {
  nlohmann::json model;
  Options options;
};

/// Validates and parses the JSON text of a config file.
AnalysisConfig parse_config(const std::string& text);

/// Builds the quadratic form described by a model block.
QuadraticForm model_from_config(const nlohmann::json& model, const Tolerances& tol = {});

/// Runs one invocation; args excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env);

}  // namespace quadham::cli
