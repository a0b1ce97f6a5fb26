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

#ifndef TELEFILTER_TRAJECTORY_LOG_H_
#define TELEFILTER_TRAJECTORY_LOG_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "telefilter/geometry.h"

namespace telefilter {

inline constexpr char kTrajectoryLogFormat[] = "telefilter.trajectory.v1";

// One control tick: the operator's commanded target and the pose the arm
// reached, both after the tick completed.
struct LogSample {
  double t = 0.0;
  Pose commanded;
  Pose executed;
  std::string fault = "ok";
  std::optional<int64_t> seq_active;
  bool gripper_closed = false;

  bool faulted() const { return fault != "ok"; }
};

struct TrajectoryLog {
  std::string task;
  std::string config_hash;
  double dt = 0.01;
  std::vector<LogSample> samples;
};

// Header line then one JSON object per sample:
//   {"type":"header","format":...,"config_hash":...,"dt":...,"task":...}
//   {"t":..,"cmd_pos":[3],"cmd_quat":[w,x,y,z],"exe_pos":[3],
//    "exe_quat":[4],"fault":"ok","seq_active":n|null,"gripper":bool}
void WriteTrajectoryLog(const TrajectoryLog& log, std::ostream& out);
absl::Status WriteTrajectoryLogFile(const TrajectoryLog& log,
                                    const std::string& path);

// Errors name the offending line number.
absl::StatusOr<TrajectoryLog> ReadTrajectoryLog(std::istream& in);
absl::StatusOr<TrajectoryLog> ReadTrajectoryLogFile(const std::string& path);

// Timestamps strictly increasing and spaced dt apart within `tolerance`.
absl::Status ValidateUniformTimestamps(const TrajectoryLog& log,
                                       double tolerance = 1e-9);

}  // namespace telefilter

#endif  // TELEFILTER_TRAJECTORY_LOG_H_
