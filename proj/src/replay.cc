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

#include "telefilter/replay.h"

#include <cmath>
#include <fstream>
#include <istream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "telefilter/gateway.h"

namespace telefilter {

namespace {

using nlohmann::json;

absl::StatusOr<Vec3> ReadVec3(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 3) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected an array of 3 numbers"));
  }
  for (const auto& v : *it) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(absl::StrCat(key, ": not a number"));
    }
  }
  return MakeVec3((*it)[0].get<double>(), (*it)[1].get<double>(),
                  (*it)[2].get<double>());
}

absl::StatusOr<ScriptedCommand> ParseLine(const json& j, size_t index,
                                          double command_frequency_hz) {
  ScriptedCommand cmd;
  const std::string type = j.value("type", "");
  if (j.contains("t")) {
    if (!j["t"].is_number() || !std::isfinite(j["t"].get<double>()) ||
        j["t"].get<double>() < 0.0) {
      return absl::InvalidArgumentError("t: expected a number >= 0");
    }
    cmd.t = j["t"].get<double>();
  } else if (type == "target") {
    return absl::InvalidArgumentError("t: required on target lines");
  } else {
    cmd.t = static_cast<double>(index) / command_frequency_hz;
  }
  if (j.contains("seq")) {
    if (!j["seq"].is_number_integer()) {
      return absl::InvalidArgumentError("seq: expected an integer");
    }
    cmd.seq = j["seq"].get<int64_t>();
  } else {
    cmd.seq = static_cast<int64_t>(index);
  }
  if (j.contains("gripper")) {
    if (!j["gripper"].is_boolean()) {
      return absl::InvalidArgumentError("gripper: expected a boolean");
    }
    cmd.gripper = j["gripper"].get<bool>();
  }
  if (type == "reset") {
    cmd.kind = ScriptedCommand::Kind::kReset;
    return cmd;
  }
  if (type == "target") {
    cmd.kind = ScriptedCommand::Kind::kTarget;
    auto pos = ReadVec3(j, "position");
    if (!pos.ok()) return pos.status();
    cmd.target.position = *pos;
    if (j.contains("quaternion")) {
      const json& q = j["quaternion"];
      if (!q.is_array() || q.size() != 4) {
        return absl::InvalidArgumentError("quaternion: expected 4 numbers");
      }
      double c[4];
      for (int i = 0; i < 4; ++i) {
        if (!q[i].is_number() || !std::isfinite(q[i].get<double>())) {
          return absl::InvalidArgumentError("quaternion: not a finite number");
        }
        c[i] = q[i].get<double>();
      }
      cmd.target.orientation = UnitQuaternion(c[0], c[1], c[2], c[3]);
    }
    return cmd;
  }
  if (type == "delta_pose") {
    cmd.kind = ScriptedCommand::Kind::kDelta;
    auto t = ReadVec3(j, "translation");
    if (!t.ok()) return t.status();
    auto r = ReadVec3(j, "rotation");
    if (!r.ok()) return r.status();
    cmd.delta.translation = *t;
    cmd.delta.rotation = WrapRotationVector(*r);
    cmd.client_time_ms = j.value("client_time_ms", int64_t{0});
    return cmd;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown command type '", type, "'"));
}

}  // namespace

absl::StatusOr<std::vector<ScriptedCommand>> ParseCommandLog(
    std::istream& in, double command_frequency_hz) {
  std::vector<ScriptedCommand> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": not a JSON object"));
    }
    if (j.value("type", "") == "header") continue;
    auto cmd = ParseLine(j, out.size(), command_frequency_hz);
    if (!cmd.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", cmd.status().message()));
    }
    if (!out.empty() && cmd->t < out.back().t) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": t goes backwards"));
    }
    out.push_back(*std::move(cmd));
  }
  return out;
}

absl::StatusOr<std::vector<ScriptedCommand>> LoadCommandLog(
    const std::string& path, double command_frequency_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto commands = ParseCommandLog(in, command_frequency_hz);
  if (!commands.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", commands.status().message()));
  }
  return commands;
}

std::vector<ScriptedCommand> CommandsFromTrace(
    const std::vector<TargetSample>& samples) {
  std::vector<ScriptedCommand> out;
  out.reserve(samples.size());
  for (const TargetSample& s : samples) {
    ScriptedCommand cmd;
    cmd.kind = ScriptedCommand::Kind::kTarget;
    cmd.t = s.t;
    cmd.seq = s.seq;
    cmd.target = s.target;
    cmd.gripper = s.gripper_closed;
    out.push_back(cmd);
  }
  return out;
}

absl::StatusOr<TrajectoryLog> Replay(GatewayConfig config,
                                     std::span<const ScriptedCommand> commands,
                                     const ReplayOptions& options) {
  config.bypass_filter = options.mode == ReplayMode::kRaw;
  auto gateway = Gateway::Create(std::move(config));
  if (!gateway.ok()) return gateway.status();
  Gateway& gw = **gateway;

  const double rate = gw.config().filter.control_frequency_hz;
  const int64_t tail = gw.config().filter.SubstepCount();
  auto tick_of = [rate](double t) {
    return static_cast<int64_t>(std::llround(t * rate));
  };
  const int64_t total =
      (commands.empty() ? 0 : tick_of(commands.back().t)) + tail;

  size_t next = 0;
  for (int64_t tick = 0; tick < total; ++tick) {
    while (next < commands.size() && tick_of(commands[next].t) <= tick) {
      const ScriptedCommand& cmd = commands[next++];
      if (cmd.kind == ScriptedCommand::Kind::kReset) {
        gw.RequestReset();
        continue;
      }
      CommandMessage msg;
      msg.seq = cmd.seq;
      msg.client_time_ms = cmd.kind == ScriptedCommand::Kind::kDelta
                               ? cmd.client_time_ms
                               : std::llround(cmd.t * 1000.0);
      msg.gripper = cmd.gripper;
      msg.delta = cmd.kind == ScriptedCommand::Kind::kTarget
                      ? PoseDiff(cmd.target, gw.LatestState().executed_pose)
                      : cmd.delta;
      gw.IngestCommand(msg);
    }
    gw.ControlTick();
  }
  TrajectoryLog log = gw.TakeLog();
  log.task = options.task;
  return log;
}

}  // namespace telefilter
