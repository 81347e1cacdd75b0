// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "irssec/ao/ao.hpp"
#include "irssec/chansim/scenario.hpp"
#include "irssec/errors.hpp"
#include "irssec/game/game.hpp"
#include "irssec/gda/gda.hpp"

namespace irssec::app {

/// Bad or inconsistent configuration. `field` is the dotted key path
/// ("radio.bandwidth_hz"); `line` is 1-based, or 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field, int line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class Solver { kAo, kGda, kGame, kAll };

std::string to_string(Solver s);
/// Throws ConfigError for an unknown name.
Solver parse_solver(const std::string& name);

struct RadioSpec {
  double P_dbm = 46.0;
  double bandwidth_hz = 5e6;
  double noise_density_dbm_hz = -174.0;

  model::RadioParams params() const;
};

enum class GameBeamformer { kPerPair, kFromAo };

struct GameParams {
  std::size_t strategy_cap = game::kDefaultStrategyCap;
  GameBeamformer beamformer = GameBeamformer::kPerPair;
  unsigned threads = 0;
};

struct ExperimentConfig {
  chansim::ScenarioSpec scenario;
  RadioSpec radio;
  model::PhaseDomain domain_B = model::PhaseDomain::discrete(5);
  model::PhaseDomain domain_E = model::PhaseDomain::discrete(5);
  Solver solver = Solver::kAll;
  ao::AOConfig ao;
  gda::GDAConfig gda;
  int gda_init_randomization_count = 10000;
  GameParams game;
  std::filesystem::path output_dir = "out";
  /// Record wall-clock times in traces and summary; off keeps outputs byte-stable.
  bool timing = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Every field with its resolved value, in the config file layout. The output
/// directory is left out so summaries from different directories compare equal.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Parses one JSON document. Missing keys take their defaults; unknown keys,
/// wrong types and out-of-range values raise ConfigError. `source` names the
/// input in messages.
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

/// Throws IoError when the file cannot be read.
ExperimentConfig parse_config(const std::filesystem::path& path);

}  // namespace irssec::app
