// Copyright 2026 The Telefilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "telefilter/command_filter.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace telefilter {

namespace {

constexpr double kRatioTolerance = 1e-6;

Vec3 GateAndCap(const Vec3& v, double noise_threshold, double speed) {
  const double norm = v.norm();
  if (norm > noise_threshold) return (v / norm) * speed;
  return Vec3::Zero();
}

absl::Status RequirePositive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, ": must be a finite value > 0 (got ", value, ")"));
  }
  return absl::OkStatus();
}

}  // namespace

int FilterParams::SubstepCount() const {
  return static_cast<int>(
      std::lround(control_frequency_hz / command_frequency_hz));
}

absl::Status ValidateFilterParams(const FilterParams& params,
                                  std::vector<std::string>* warnings) {
  for (const auto& [value, name] :
       {std::pair{params.command_frequency_hz, "command_frequency_hz"},
        std::pair{params.control_frequency_hz, "control_frequency_hz"},
        std::pair{params.max_position_speed_m, "max_position_speed_m"},
        std::pair{params.max_orientation_speed_rad,
                  "max_orientation_speed_rad"},
        std::pair{params.noise_position_threshold_m,
                  "noise_position_threshold_m"},
        std::pair{params.noise_orientation_threshold_rad,
                  "noise_orientation_threshold_rad"}}) {
    if (auto status = RequirePositive(value, name); !status.ok()) return status;
  }
  if (params.control_frequency_hz <= params.command_frequency_hz) {
    return absl::InvalidArgumentError(absl::StrCat(
        "control_frequency_hz: must be greater than command_frequency_hz "
        "(f' > f), got f' = ",
        params.control_frequency_hz, ", f = ", params.command_frequency_hz));
  }
  const double ratio =
      params.control_frequency_hz / params.command_frequency_hz;
  const int substeps = params.SubstepCount();
  if (substeps < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "control_frequency_hz: f'/f = ", ratio,
        " rounds to fewer than 2 substeps per command"));
  }
  if (warnings != nullptr && std::abs(ratio - substeps) > kRatioTolerance) {
    warnings->push_back(absl::StrCat("control_frequency_hz: f'/f = ", ratio,
                                     " is not an integer; using ", substeps,
                                     " substeps per command"));
  }
  return absl::OkStatus();
}

FilteredDelta FilterDelta(const DeltaPose& delta, const FilterParams& params) {
  FilteredDelta out;
  out.translation = GateAndCap(delta.translation,
                               params.noise_position_threshold_m,
                               params.max_position_speed_m);
  out.rotation = GateAndCap(delta.rotation,
                            params.noise_orientation_threshold_rad,
                            params.max_orientation_speed_rad);
  return out;
}

SubstepPlan Interpolate(const FilteredDelta& filtered,
                        const FilterParams& params) {
  const int count = params.SubstepCount();
  DeltaPose step;
  step.translation = filtered.translation / static_cast<double>(count);
  step.rotation = filtered.rotation / static_cast<double>(count);
  return SubstepPlan{std::vector<DeltaPose>(count, step),
                     params.ControlPeriod()};
}

SubstepPlan ProcessCommand(const DeltaPose& delta, const FilterParams& params) {
  return Interpolate(FilterDelta(delta, params), params);
}

SubstepPlan InterpolateUnfiltered(const DeltaPose& delta,
                                  const FilterParams& params) {
  return Interpolate(FilteredDelta{delta.translation, delta.rotation}, params);
}

}  // namespace telefilter
