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

#ifndef TELEFILTER_SYNTH_H_
#define TELEFILTER_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "telefilter/geometry.h"

namespace telefilter {

enum class TraceKind { kLine, kArc, kJitteryPickPlace, kNoiseHold };

std::string_view TraceKindName(TraceKind kind);
absl::StatusOr<TraceKind> ParseTraceKind(std::string_view name);

// Stand-in for a human operator's hand-controller stream.
struct SyntheticTraceSpec {
  TraceKind kind = TraceKind::kJitteryPickPlace;
  double duration_s = 30.0;
  double amplitude_m = 0.15;
  // Per-axis standard deviation of the position jitter. Orientation jitter
  // uses jitter_std_m / kOrientationJitterLeverM radians per axis.
  double jitter_std_m = 0.002;
  uint64_t seed = 42;
};

inline constexpr double kOrientationJitterLeverM = 0.2;

absl::Status ValidateTraceSpec(const SyntheticTraceSpec& spec);

// Absolute operator target at one command instant.
struct TargetSample {
  int64_t seq = 0;
  double t = 0.0;
  Pose target;
  bool gripper_closed = false;
};

// Samples the operator target at `command_frequency_hz` starting from
// `start`. Same spec and start give the same samples.
absl::StatusOr<std::vector<TargetSample>> GenerateTrace(
    const SyntheticTraceSpec& spec, const Pose& start,
    double command_frequency_hz);

// Command log (JSON Lines): a header describing the spec, then one
// {"type":"target","seq","t","position","quaternion","gripper"} per sample.
std::string SerializeTargetLog(const SyntheticTraceSpec& spec,
                               double command_frequency_hz,
                               const std::vector<TargetSample>& samples);

// Ten fast jittery pick-and-place sessions used for fault and smoothness
// checks.
std::vector<SyntheticTraceSpec> BundledJitteryCorpus();

}  // namespace telefilter

#endif  // TELEFILTER_SYNTH_H_
