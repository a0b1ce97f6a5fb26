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

#ifndef TELEFILTER_COMMAND_FILTER_H_
#define TELEFILTER_COMMAND_FILTER_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "telefilter/geometry.h"

namespace telefilter {

// Two-stage command filter parameters. Speeds are displacements per
// command period (1 / command_frequency_hz), not per second.
struct FilterParams {
  double command_frequency_hz = 20.0;
  double control_frequency_hz = 100.0;
  double max_position_speed_m = 0.005;
  double max_orientation_speed_rad = 0.02;
  double noise_position_threshold_m = 0.001;
  double noise_orientation_threshold_rad = 0.005;

  // K = round(f' / f).
  int SubstepCount() const;
  double ControlPeriod() const { return 1.0 / control_frequency_hz; }
  double CommandPeriod() const { return 1.0 / command_frequency_hz; }
};

// Checks positivity, f' > f and K >= 2. A non-integer f'/f is accepted but
// reported through `warnings` when provided.
absl::Status ValidateFilterParams(const FilterParams& params,
                                  std::vector<std::string>* warnings = nullptr);

// Output of the noise gate + speed cap. |translation| is 0 or s_p and
// |rotation| is 0 or s_o.
struct FilteredDelta {
  Vec3 translation = Vec3::Zero();
  Vec3 rotation = Vec3::Zero();
};

// K equal increments emitted one per control period.
struct SubstepPlan {
  std::vector<DeltaPose> substeps;
  double period_s = 0.0;
};

// Stage one: each part is zeroed when its norm is <= its noise threshold
// (strict >), otherwise replaced by its direction scaled to the speed cap.
FilteredDelta FilterDelta(const DeltaPose& delta, const FilterParams& params);

// Stage two: uniform linear interpolation into K = round(f'/f) substeps.
// Dividing the rotation vector is exact because it is a single-axis rotation.
SubstepPlan Interpolate(const FilteredDelta& filtered,
                        const FilterParams& params);

// Interpolate(FilterDelta(delta, params), params).
SubstepPlan ProcessCommand(const DeltaPose& delta, const FilterParams& params);

// Interpolation only, used to replay unfiltered commands.
SubstepPlan InterpolateUnfiltered(const DeltaPose& delta,
                                  const FilterParams& params);

}  // namespace telefilter

#endif  // TELEFILTER_COMMAND_FILTER_H_
