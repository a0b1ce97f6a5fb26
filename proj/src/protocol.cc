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

#include "telefilter/protocol.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "json.hpp"

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

absl::StatusOr<int64_t> ReadInt(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected an integer"));
  }
  return it->get<int64_t>();
}

json PoseJson(const Pose& p) {
  const auto& q = p.orientation;
  return {{"position", {p.position.x(), p.position.y(), p.position.z()}},
          {"quaternion", {q.w(), q.x(), q.y(), q.z()}}};
}

absl::StatusOr<Pose> ReadPose(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_object()) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": expected a pose"));
  }
  auto pos = ReadVec3(*it, "position");
  if (!pos.ok()) return pos.status();
  const auto q = it->find("quaternion");
  if (q == it->end() || !q->is_array() || q->size() != 4) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ".quaternion: expected 4 numbers"));
  }
  return Pose{*pos, UnitQuaternion((*q)[0].get<double>(), (*q)[1].get<double>(),
                                   (*q)[2].get<double>(), (*q)[3].get<double>())};
}

json FaultJson(const FaultStatus& f) {
  if (!f.tripped) return {{"status", "ok"}};
  json j = {{"status", "tripped"}, {"at_time", f.at_time}};
  const std::string full = f.ToString();
  j["reason"] = std::string(full.substr(0, full.find(':')));
  if (f.joint >= 0) j["joint"] = f.joint;
  return j;
}

absl::StatusOr<FaultStatus> ReadFault(const json& j) {
  if (!j.is_object() || !j.contains("status")) {
    return absl::InvalidArgumentError("fault: expected {status, reason?}");
  }
  FaultStatus f;
  const std::string status = j["status"].get<std::string>();
  if (status == "ok") return f;
  if (status != "tripped") {
    return absl::InvalidArgumentError(absl::StrCat("fault.status: ", status));
  }
  f.tripped = true;
  f.at_time = j.value("at_time", 0.0);
  f.joint = j.value("joint", -1);
  const std::string reason = j.value("reason", "");
  if (reason == "joint_velocity_exceeded") {
    f.reason = FaultReason::kJointVelocityExceeded;
  } else if (reason == "joint_limit_violated") {
    f.reason = FaultReason::kJointLimitViolated;
  } else if (reason == "tracking_diverged") {
    f.reason = FaultReason::kTrackingDiverged;
  } else {
    return absl::InvalidArgumentError(absl::StrCat("fault.reason: ", reason));
  }
  return f;
}

}  // namespace

absl::StatusOr<ClientMessage> ParseClientMessage(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("malformed: not a JSON object");
  }
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) {
    return absl::InvalidArgumentError("malformed: missing type");
  }
  const std::string kind = type->get<std::string>();
  if (kind == "reset") return ResetMessage{};
  if (kind == "describe") return DescribeMessage{};
  if (kind == "step") {
    StepMessage step;
    if (j.contains("ticks")) {
      auto ticks = ReadInt(j, "ticks");
      if (!ticks.ok() || *ticks < 1 || *ticks > 1'000'000) {
        return absl::InvalidArgumentError(
            "malformed: ticks must be an integer in [1, 1000000]");
      }
      step.ticks = static_cast<int>(*ticks);
    }
    return step;
  }
  if (kind != "delta_pose") {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed: unknown type '", kind, "'"));
  }
  CommandMessage msg;
  auto seq = ReadInt(j, "seq");
  if (!seq.ok()) return absl::InvalidArgumentError("malformed: seq");
  msg.seq = *seq;
  auto t = ReadVec3(j, "translation");
  if (!t.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed: ", t.status().message()));
  }
  auto r = ReadVec3(j, "rotation");
  if (!r.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed: ", r.status().message()));
  }
  msg.delta.translation = *t;
  msg.delta.rotation = WrapRotationVector(*r);
  if (j.contains("client_time_ms")) {
    auto ms = ReadInt(j, "client_time_ms");
    if (!ms.ok()) return absl::InvalidArgumentError("malformed: client_time_ms");
    msg.client_time_ms = *ms;
  }
  if (j.contains("gripper")) {
    if (!j["gripper"].is_boolean()) {
      return absl::InvalidArgumentError("malformed: gripper must be boolean");
    }
    msg.gripper = j["gripper"].get<bool>();
  }
  return msg;
}

std::string SerializeCommand(const CommandMessage& msg) {
  const Vec3& t = msg.delta.translation;
  const Vec3& r = msg.delta.rotation;
  json j = {{"type", "delta_pose"},
            {"seq", msg.seq},
            {"translation", {t.x(), t.y(), t.z()}},
            {"rotation", {r.x(), r.y(), r.z()}},
            {"client_time_ms", msg.client_time_ms}};
  if (msg.gripper) j["gripper"] = *msg.gripper;
  return j.dump();
}

std::optional<int64_t> PeekSeq(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  const auto it = j.find("seq");
  if (it == j.end() || !it->is_number_integer()) return std::nullopt;
  return it->get<int64_t>();
}

std::string SerializeState(const StateMessage& msg) {
  json j = {{"type", "state"},
            {"tick", msg.tick},
            {"sim_time_s", msg.sim_time_s},
            {"executed_pose", PoseJson(msg.executed_pose)},
            {"commanded_pose", PoseJson(msg.commanded_pose)},
            {"joint_positions",
             std::vector<double>(msg.joint_positions.data(),
                                 msg.joint_positions.data() + kNumJoints)},
            {"fault", FaultJson(msg.fault)},
            {"active_plan_remaining", msg.active_plan_remaining},
            {"seq_active", msg.seq_active ? json(*msg.seq_active) : json()},
            {"gripper", msg.gripper_closed}};
  return j.dump();
}

absl::StatusOr<StateMessage> ParseStateMessage(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || j.value("type", "") != "state") {
    return absl::InvalidArgumentError("not a state message");
  }
  try {
    StateMessage msg;
    msg.tick = j.at("tick").get<int64_t>();
    msg.sim_time_s = j.at("sim_time_s").get<double>();
    auto exe = ReadPose(j, "executed_pose");
    if (!exe.ok()) return exe.status();
    auto cmd = ReadPose(j, "commanded_pose");
    if (!cmd.ok()) return cmd.status();
    msg.executed_pose = *exe;
    msg.commanded_pose = *cmd;
    const auto& joints = j.at("joint_positions");
    if (!joints.is_array() || joints.size() != kNumJoints) {
      return absl::InvalidArgumentError("joint_positions: expected 6 numbers");
    }
    for (int i = 0; i < kNumJoints; ++i) {
      msg.joint_positions[i] = joints[i].get<double>();
    }
    auto fault = ReadFault(j.at("fault"));
    if (!fault.ok()) return fault.status();
    msg.fault = *fault;
    msg.active_plan_remaining = j.at("active_plan_remaining").get<int>();
    if (!j.at("seq_active").is_null()) {
      msg.seq_active = j["seq_active"].get<int64_t>();
    }
    msg.gripper_closed = j.value("gripper", false);
    return msg;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  }
}

std::string_view OutcomeName(IngestOutcome outcome) {
  switch (outcome) {
    case IngestOutcome::kAccepted:
      return "accepted";
    case IngestOutcome::kReplaced:
      return "replaced";
    case IngestOutcome::kRejected:
      return "rejected";
  }
  return "rejected";
}

std::string SerializeAck(std::optional<int64_t> seq,
                         const IngestResult& result) {
  json j = {{"type", "ack"},
            {"seq", seq ? json(*seq) : json()},
            {"result", OutcomeName(result.outcome)}};
  if (!result.reason.empty()) j["reason"] = result.reason;
  return j.dump();
}

std::string SerializeError(std::string_view reason) {
  return json{{"type", "error"}, {"reason", reason}}.dump();
}

std::string SerializeDescribe(const GatewayConfig& config) {
  json dh = json::array(), limits = json::array();
  for (const DHLink& l : config.controller.dh) {
    dh.push_back({{"a", l.a}, {"alpha", l.alpha}, {"d", l.d},
                  {"theta_offset", l.theta_offset}});
  }
  for (const JointLimit& l : config.controller.limits) {
    limits.push_back(
        {{"q_min", l.q_min}, {"q_max", l.q_max}, {"v_max", l.v_max}});
  }
  const FilterParams& f = config.filter;
  json j = {{"type", "describe"},
            {"protocol", kSubprotocol},
            {"dh", dh},
            {"limits", limits},
            {"home", std::vector<double>(config.home.data(),
                                         config.home.data() + kNumJoints)},
            {"command_frequency_hz", f.command_frequency_hz},
            {"control_frequency_hz", f.control_frequency_hz},
            {"telemetry_decimation", config.server.telemetry_decimation}};
  return j.dump();
}

}  // namespace telefilter
