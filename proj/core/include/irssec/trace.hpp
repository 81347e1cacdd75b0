// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "irssec/model/channel.hpp"

namespace irssec {

enum class StepLabel { kInit, kThetaB, kW, kThetaE, kGame };

std::string_view to_string(StepLabel s);
std::optional<StepLabel> parse_step_label(std::string_view s);

struct TraceRecord {
  int iteration = 0;
  StepLabel step = StepLabel::kInit;
  double secrecy = 0.0;
  double bob = 0.0;
  double eve = 0.0;
  double wall_ms = 0.0;  // since the start of the run

  static TraceRecord from_rates(int iteration, StepLabel step, const model::SecrecyRates& r, double wall_ms) {
    return {iteration, step, r.secrecy, r.bob, r.eve, wall_ms};
  }
};

using Trace = std::vector<TraceRecord>;

}  // namespace irssec
