// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "irssec/app/config.hpp"
#include "irssec/trace.hpp"

namespace irssec::app {

inline constexpr const char* kTraceHeader =
    "iteration,step_label,secrecy_rate_bps_hz,bob_rate_bps_hz,eve_rate_bps_hz,wall_ms";

/// Header plus one line per record, LF terminated, numbers with 17
/// significant digits. Throws IoError with the path on failure.
void emit_trace(const Trace& trace, const std::filesystem::path& path);
std::string trace_csv(const Trace& trace);
/// Inverse of trace_csv; throws ContractViolation naming the bad line.
Trace parse_trace(const std::string& text);

struct SolverOutcome {
  std::string name;  // ao, gda, game
  bool ok = false;
  std::string error;
  double secrecy = 0.0;  // last trace row
  double bob = 0.0;
  double eve = 0.0;
  /// Smallest C_s over Eve's strategy space at the final (theta_B, w), when
  /// her domain is discrete and within the strategy cap.
  std::optional<double> worst_case;
  int iterations = 0;
  bool converged = false;
  double wall_ms = 0.0;
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json extra = nlohmann::json::object();
};

struct RunResult {
  std::string artifact_version;
  std::uint64_t seed = 0;
  nlohmann::json config;  // to_json of the resolved config
  std::vector<SolverOutcome> solvers;
  std::filesystem::path output_dir;

  bool all_failed() const;
  nlohmann::json summary() const;
};

std::string artifact_version();

/// Writes the generated channels and the resolved scenario as scenario.json.
std::filesystem::path write_scenario(const ExperimentConfig& cfg);

/// Generates the channels once, runs the selected solvers on them, and
/// writes <solver>_trace.csv files, the game's payoff CSV and solution JSON,
/// and summary.json into cfg.output_dir. A solver failure is recorded in its
/// outcome and the remaining solvers still run. I/O failures throw IoError.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace irssec::app
