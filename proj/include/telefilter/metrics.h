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

#ifndef TELEFILTER_METRICS_H_
#define TELEFILTER_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "telefilter/geometry.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {

// Consecutive commanded samples closer than this count as idle.
inline constexpr double kIdleMotionThresholdM = 1e-4;

// Root mean square of |cmd_pos - exe_pos| over all samples, millimeters.
absl::StatusOr<double> RmsErrorMm(const TrajectoryLog& log);

// Mean norm of the third forward difference divided by dt^3 (m/s^3).
// Needs at least 4 samples.
absl::StatusOr<double> AverageJerkNorm(std::span<const Vec3> positions,
                                       double dt);

// Same average without the dt^3 division (meters per sample^3).
absl::StatusOr<double> AverageJerkNormPerSample(
    std::span<const Vec3> positions);

struct CompletionTime {
  double seconds = 0.0;
  bool all_idle = false;
  // Sample the first commanded move starts from; 0 when idle.
  size_t first_active = 0;
};

// Span of commanded motion with leading and trailing idle trimmed: from the
// sample where the first move (> kIdleMotionThresholdM between consecutive
// samples) starts to the sample where the last one ends.
absl::StatusOr<CompletionTime> ComputeCompletionTime(const TrajectoryLog& log);

// Mean geodesic angle between commanded and executed orientation, radians.
absl::StatusOr<double> MeanOrientationErrorRad(const TrajectoryLog& log);

std::vector<Vec3> CommandedPositions(const TrajectoryLog& log);
std::vector<Vec3> ExecutedPositions(const TrajectoryLog& log);

// Ok -> tripped transitions in the log.
int CountFaults(const TrajectoryLog& log);

struct MetricsReport {
  std::string task_name;
  double time_s = 0.0;
  double rms_mm = 0.0;
  // SI convention (m/s^3).
  double commanded_jerk = 0.0;
  double executed_jerk = 0.0;
  // Per-sample convention (no dt division).
  double commanded_jerk_per_sample = 0.0;
  double executed_jerk_per_sample = 0.0;
  // Extra column, not part of the task table.
  double orientation_error_rad = 0.0;
  int sample_count = 0;
  int fault_count = 0;
  bool idle_warning = false;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Jerk metrics need >= 4 samples; shorter logs report zero jerk.
absl::StatusOr<MetricsReport> ComputeMetrics(const TrajectoryLog& log,
                                             std::string task_name);

enum class JerkConvention { kSi, kPerSample };

// Plain-text table: Task | Time (s) | RMS (mm) | Comm. Jerk | Exe. Jerk,
// followed by a line naming the jerk convention. Rejects empty task names.
absl::StatusOr<std::string> RenderReportTable(
    std::span<const MetricsReport> reports, JerkConvention convention);

// All MetricsReport fields, RFC 4180 quoting, shortest round-trip numbers.
absl::StatusOr<std::string> RenderReportCsv(
    std::span<const MetricsReport> reports);
absl::StatusOr<std::vector<MetricsReport>> ParseReportCsv(
    std::string_view csv);

// Table number formatting: times and RMS to 3 decimals with trailing zeros
// dropped; jerks to 3 significant digits.
std::string FormatDecimals(double value);
std::string FormatSignificant(double value);

// Columns: kind,t,cmd_x,cmd_y,cmd_z,exe_x,exe_y,exe_z. One "sample" row per
// log sample plus a leading "start" row repeating the first active sample.
absl::StatusOr<std::string> ExportPlotData(const TrajectoryLog& log);

}  // namespace telefilter

#endif  // TELEFILTER_METRICS_H_
