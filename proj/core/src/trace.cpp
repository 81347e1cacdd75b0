// SPDX-License-Identifier: Apache-2.0
#include "irssec/trace.hpp"

#include <array>
#include <utility>

namespace irssec {
namespace {

constexpr std::array<std::pair<StepLabel, std::string_view>, 5> kLabels{{
    {StepLabel::kInit, "init"},
    {StepLabel::kThetaB, "theta_B"},
    {StepLabel::kW, "w"},
    {StepLabel::kThetaE, "theta_E"},
    {StepLabel::kGame, "game"},
}};

}  // namespace

std::string_view to_string(StepLabel s) {
  for (const auto& [label, name] : kLabels)
    if (label == s) return name;
  return "unknown";
}

std::optional<StepLabel> parse_step_label(std::string_view s) {
  for (const auto& [label, name] : kLabels)
    if (name == s) return label;
  return std::nullopt;
}

}  // namespace irssec
