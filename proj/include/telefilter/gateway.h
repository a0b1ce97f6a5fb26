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

#ifndef TELEFILTER_GATEWAY_H_
#define TELEFILTER_GATEWAY_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "telefilter/command_filter.h"
#include "telefilter/config.h"
#include "telefilter/controller_sim.h"
#include "telefilter/protocol.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {

// The control side of a teleoperation session, independent of transport and
// clock. Network threads call IngestCommand/RequestReset; exactly one
// executor calls ControlTick. Commands pass through a single-slot mailbox
// (latest wins), so at most one plan is active and at most one command is
// pending.
class Gateway {
 public:
  static absl::StatusOr<std::unique_ptr<Gateway>> Create(GatewayConfig config);

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  // Thread-safe. Stale seq (<= last seen) and commands sent while faulted
  // are rejected; a command that supersedes a pending command or an
  // unfinished plan is reported as replaced.
  IngestResult IngestCommand(const CommandMessage& msg);
  void RequestReset();

  // Executor only. Installs the mailbox command (if any) at the tick
  // boundary, executes one substep, logs the sample and returns the
  // post-tick state.
  StateMessage ControlTick();

  // Thread-safe snapshot of the most recent completed tick.
  StateMessage LatestState() const;
  int MailboxDepth() const;

  const GatewayConfig& config() const { return config_; }
  double dt() const { return config_.filter.ControlPeriod(); }

  // Executor only.
  const TrajectoryLog& log() const { return log_; }
  TrajectoryLog TakeLog();
  int64_t ticks() const { return tick_; }

 private:
  explicit Gateway(GatewayConfig config);

  void InstallCommand(const CommandMessage& msg);
  StateMessage MakeState() const;

  GatewayConfig config_;
  ControllerSim sim_;

  mutable std::mutex mu_;
  std::optional<CommandMessage> mailbox_;  // guarded by mu_
  bool reset_requested_ = false;           // guarded by mu_
  std::optional<int64_t> last_seq_;        // guarded by mu_
  StateMessage latest_;                    // guarded by mu_
  std::atomic<int> plan_remaining_{0};
  std::atomic<bool> faulted_{false};

  // Executor state.
  ArmState state_;
  std::vector<DeltaPose> plan_;
  size_t plan_next_ = 0;
  std::optional<int64_t> plan_seq_;
  Pose operator_target_;
  bool gripper_closed_ = false;
  int64_t tick_ = 0;
  TrajectoryLog log_;
};

}  // namespace telefilter

#endif  // TELEFILTER_GATEWAY_H_
