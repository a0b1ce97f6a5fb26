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

#include "telefilter/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace telefilter {

namespace {

// Pick-and-place timing: fast reaches separated by holds.
constexpr double kReachMinS = 0.35;
constexpr double kReachMaxS = 0.6;
constexpr double kHoldMinS = 0.8;
constexpr double kHoldMaxS = 1.6;

// Quintic minimum-jerk profile on [0, 1].
double MinJerk(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

struct Reach {
  double start_s;
  double end_s;
  Vec3 from;
  Vec3 to;
};

std::vector<Reach> PlanPickPlace(const SyntheticTraceSpec& spec,
                                 const Vec3& origin, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> reach(kReachMinS, kReachMaxS);
  std::uniform_real_distribution<double> hold(kHoldMinS, kHoldMaxS);
  std::vector<Reach> reaches;
  double t = 0.0;
  Vec3 current = origin;
  while (t < spec.duration_s) {
    const Vec3 next =
        origin + spec.amplitude_m *
                     Vec3(unit(rng), unit(rng), 0.5 * unit(rng));
    const double move = reach(rng);
    reaches.push_back({t, t + move, current, next});
    t += move + hold(rng);
    current = next;
  }
  return reaches;
}

Vec3 PickPlaceAt(const std::vector<Reach>& reaches, double t, int* completed) {
  *completed = 0;
  for (const Reach& r : reaches) {
    if (t < r.start_s) return r.from;
    if (t <= r.end_s) {
      return r.from + (r.to - r.from) *
                          MinJerk((t - r.start_s) / (r.end_s - r.start_s));
    }
    ++*completed;
  }
  return reaches.back().to;
}

}  // namespace

std::string_view TraceKindName(TraceKind kind) {
  switch (kind) {
    case TraceKind::kLine:
      return "line";
    case TraceKind::kArc:
      return "arc";
    case TraceKind::kJitteryPickPlace:
      return "jittery-pick-place";
    case TraceKind::kNoiseHold:
      return "noise-hold";
  }
  return "line";
}

absl::StatusOr<TraceKind> ParseTraceKind(std::string_view name) {
  for (TraceKind k : {TraceKind::kLine, TraceKind::kArc,
                      TraceKind::kJitteryPickPlace, TraceKind::kNoiseHold}) {
    if (TraceKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown trace kind '", std::string(name),
      "' (expected line, arc, jittery-pick-place or noise-hold)"));
}

absl::Status ValidateTraceSpec(const SyntheticTraceSpec& spec) {
  if (!std::isfinite(spec.duration_s) || spec.duration_s <= 0.0) {
    return absl::InvalidArgumentError("duration_s: must be > 0");
  }
  if (!std::isfinite(spec.amplitude_m) || spec.amplitude_m < 0.0) {
    return absl::InvalidArgumentError("amplitude_m: must be >= 0");
  }
  if (!std::isfinite(spec.jitter_std_m) || spec.jitter_std_m < 0.0) {
    return absl::InvalidArgumentError("jitter_std_m: must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<TargetSample>> GenerateTrace(
    const SyntheticTraceSpec& spec, const Pose& start,
    double command_frequency_hz) {
  if (auto s = ValidateTraceSpec(spec); !s.ok()) return s;
  if (!(command_frequency_hz > 0.0)) {
    return absl::InvalidArgumentError("command_frequency_hz: must be > 0");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<Reach> reaches;
  if (spec.kind == TraceKind::kJitteryPickPlace) {
    reaches = PlanPickPlace(spec, start.position, rng);
  }
  std::normal_distribution<double> jitter(0.0, 1.0);
  const double rot_std = spec.jitter_std_m / kOrientationJitterLeverM;

  const auto count = static_cast<int64_t>(
      std::floor(spec.duration_s * command_frequency_hz + 1e-9));
  std::vector<TargetSample> out;
  out.reserve(count);
  for (int64_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / command_frequency_hz;
    const double s = MinJerk(t / spec.duration_s);
    Vec3 nominal = start.position;
    bool gripper = false;
    switch (spec.kind) {
      case TraceKind::kLine:
        nominal += Vec3::UnitX() * (spec.amplitude_m * s);
        break;
      case TraceKind::kArc: {
        const double phi = std::numbers::pi * s;
        nominal += spec.amplitude_m *
                   Vec3(std::cos(phi) - 1.0, std::sin(phi), 0.0);
        break;
      }
      case TraceKind::kJitteryPickPlace: {
        int completed = 0;
        nominal = PickPlaceAt(reaches, t, &completed);
        // Grasp after odd-numbered reaches, release after even ones.
        gripper = completed % 2 == 1;
        break;
      }
      case TraceKind::kNoiseHold:
        break;
    }
    TargetSample sample;
    sample.seq = k;
    sample.t = t;
    sample.gripper_closed = gripper;
    if (spec.jitter_std_m > 0.0) {
      const Vec3 dp(jitter(rng), jitter(rng), jitter(rng));
      const Vec3 dr(jitter(rng), jitter(rng), jitter(rng));
      sample.target.position = nominal + spec.jitter_std_m * dp;
      sample.target.orientation =
          start.orientation * RotvecToQuat(rot_std * dr);
    } else {
      sample.target.position = nominal;
      sample.target.orientation = start.orientation;
    }
    out.push_back(sample);
  }
  return out;
}

std::string SerializeTargetLog(const SyntheticTraceSpec& spec,
                               double command_frequency_hz,
                               const std::vector<TargetSample>& samples) {
  using nlohmann::json;
  std::string out =
      json{{"type", "header"},
           {"format", "telefilter.commands.v1"},
           {"kind", TraceKindName(spec.kind)},
           {"duration_s", spec.duration_s},
           {"amplitude_m", spec.amplitude_m},
           {"jitter_std_m", spec.jitter_std_m},
           {"seed", spec.seed},
           {"command_frequency_hz", command_frequency_hz}}
          .dump();
  out += '\n';
  for (const TargetSample& s : samples) {
    const Vec3& p = s.target.position;
    const UnitQuaternion& q = s.target.orientation;
    out += json{{"type", "target"},
                {"seq", s.seq},
                {"t", s.t},
                {"position", {p.x(), p.y(), p.z()}},
                {"quaternion", {q.w(), q.x(), q.y(), q.z()}},
                {"gripper", s.gripper_closed}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<SyntheticTraceSpec> BundledJitteryCorpus() {
  std::vector<SyntheticTraceSpec> corpus;
  for (uint64_t i = 0; i < 10; ++i) {
    SyntheticTraceSpec spec;
    spec.kind = TraceKind::kJitteryPickPlace;
    spec.duration_s = 20.0 + 2.0 * static_cast<double>(i);
    spec.amplitude_m = i % 2 == 0 ? 0.15 : 0.12;
    spec.jitter_std_m = 0.002;
    spec.seed = 1000 + i;
    corpus.push_back(spec);
  }
  return corpus;
}

}  // namespace telefilter
