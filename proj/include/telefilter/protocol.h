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

#ifndef TELEFILTER_PROTOCOL_H_
#define TELEFILTER_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "absl/status/statusor.h"
#include "telefilter/arm_model.h"
#include "telefilter/config.h"
#include "telefilter/controller_sim.h"
#include "telefilter/geometry.h"

// Wire protocol "telefilter.v1": one UTF-8 JSON object per websocket text
// frame on path /teleop.
//
// Client -> gateway:
//   {"type":"delta_pose","seq":n,"translation":[3],"rotation":[3],
//    "client_time_ms":n,"gripper":bool?}
//   {"type":"reset"}
//   {"type":"describe"}
//   {"type":"step","ticks":n}            simulated clock only
// Gateway -> client:
//   {"type":"state",...}                 see StateMessage
//   {"type":"ack","seq":n|null,"result":"accepted|replaced|rejected",
//    "reason":"..."?}
//   {"type":"describe",...}              DH table, limits, home, filter
//   {"type":"error","reason":"..."}
namespace telefilter {

inline constexpr char kSubprotocol[] = "telefilter.v1";
inline constexpr char kEndpointPath[] = "/teleop";
inline constexpr char kSessionBusy[] = "session busy";

struct CommandMessage {
  int64_t seq = 0;
  DeltaPose delta;
  int64_t client_time_ms = 0;
  std::optional<bool> gripper;
};
struct ResetMessage {};
struct DescribeMessage {};
struct StepMessage {
  int ticks = 1;
};
using ClientMessage =
    std::variant<CommandMessage, ResetMessage, DescribeMessage, StepMessage>;

// Rejects unknown types, missing fields and non-finite numbers. The rotation
// vector is wrapped to |r| <= pi.
absl::StatusOr<ClientMessage> ParseClientMessage(std::string_view text);
std::string SerializeCommand(const CommandMessage& msg);

// Best-effort extraction of "seq" from a frame that failed to parse.
std::optional<int64_t> PeekSeq(std::string_view text);

struct StateMessage {
  int64_t tick = 0;
  double sim_time_s = 0.0;
  Pose executed_pose;
  Pose commanded_pose;
  JointVector joint_positions = JointVector::Zero();
  FaultStatus fault;
  int active_plan_remaining = 0;
  std::optional<int64_t> seq_active;
  bool gripper_closed = false;
};

std::string SerializeState(const StateMessage& msg);
absl::StatusOr<StateMessage> ParseStateMessage(std::string_view text);

enum class IngestOutcome { kAccepted, kReplaced, kRejected };

struct IngestResult {
  IngestOutcome outcome = IngestOutcome::kAccepted;
  std::string reason;  // set when rejected
};

std::string_view OutcomeName(IngestOutcome outcome);
std::string SerializeAck(std::optional<int64_t> seq, const IngestResult& result);
std::string SerializeError(std::string_view reason);
std::string SerializeDescribe(const GatewayConfig& config);

}  // namespace telefilter

#endif  // TELEFILTER_PROTOCOL_H_
