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

#ifndef TELEFILTER_REPLAY_H_
#define TELEFILTER_REPLAY_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "telefilter/config.h"
#include "telefilter/geometry.h"
#include "telefilter/synth.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {

// One line of a command log. Target lines carry the operator's absolute
// hand target; the delta is formed against the executed pose at delivery
// time, as a live client would.
struct ScriptedCommand {
  enum class Kind { kTarget, kDelta, kReset };
  Kind kind = Kind::kDelta;
  double t = 0.0;
  int64_t seq = 0;
  Pose target;
  DeltaPose delta;
  int64_t client_time_ms = 0;
  std::optional<bool> gripper;
};

// Accepts "target", "delta_pose" and "reset" lines plus an optional header.
// delta_pose lines without "t" are spaced at 1/command_frequency_hz.
// Errors name the line number.
absl::StatusOr<std::vector<ScriptedCommand>> ParseCommandLog(
    std::istream& in, double command_frequency_hz);
absl::StatusOr<std::vector<ScriptedCommand>> LoadCommandLog(
    const std::string& path, double command_frequency_hz);

std::vector<ScriptedCommand> CommandsFromTrace(
    const std::vector<TargetSample>& samples);

enum class ReplayMode { kFiltered, kRaw };

struct ReplayOptions {
  ReplayMode mode = ReplayMode::kFiltered;
  std::string task;
};

// Drives a Gateway on a simulated clock: commands stamped t are delivered
// before tick round(t * f'), and the run ends one command period after the
// last command. Deterministic for identical inputs.
absl::StatusOr<TrajectoryLog> Replay(GatewayConfig config,
                                     std::span<const ScriptedCommand> commands,
                                     const ReplayOptions& options);

}  // namespace telefilter

#endif  // TELEFILTER_REPLAY_H_
