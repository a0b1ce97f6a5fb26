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

#include "telefilter/gateway.h"

#include <utility>

namespace telefilter {

absl::StatusOr<std::unique_ptr<Gateway>> Gateway::Create(GatewayConfig config) {
  if (auto s = ValidateGatewayConfig(config); !s.ok()) return s;
  auto gateway = std::unique_ptr<Gateway>(new Gateway(std::move(config)));
  auto state = gateway->sim_.Reset(gateway->config_.home);
  if (!state.ok()) return state.status();
  gateway->state_ = *state;
  gateway->operator_target_ = state->executed_pose;
  gateway->latest_ = gateway->MakeState();
  return gateway;
}

Gateway::Gateway(GatewayConfig config)
    : config_(std::move(config)), sim_(config_.controller) {
  log_.config_hash = ConfigHash(config_);
  log_.dt = config_.filter.ControlPeriod();
}

IngestResult Gateway::IngestCommand(const CommandMessage& msg) {
  std::lock_guard<std::mutex> lock(mu_);
  if (last_seq_ && msg.seq <= *last_seq_) {
    return {IngestOutcome::kRejected, "stale"};
  }
  if (!IsFinite(msg.delta.translation) || !IsFinite(msg.delta.rotation)) {
    return {IngestOutcome::kRejected, "malformed"};
  }
  if (faulted_.load() && !reset_requested_) {
    return {IngestOutcome::kRejected, "faulted: reset required"};
  }
  last_seq_ = msg.seq;
  const bool replaces = mailbox_.has_value() || plan_remaining_.load() > 0;
  mailbox_ = msg;
  return {replaces ? IngestOutcome::kReplaced : IngestOutcome::kAccepted, ""};
}

void Gateway::RequestReset() {
  std::lock_guard<std::mutex> lock(mu_);
  reset_requested_ = true;
  mailbox_.reset();
}

int Gateway::MailboxDepth() const {
  std::lock_guard<std::mutex> lock(mu_);
  return mailbox_.has_value() ? 1 : 0;
}

StateMessage Gateway::LatestState() const {
  std::lock_guard<std::mutex> lock(mu_);
  return latest_;
}

TrajectoryLog Gateway::TakeLog() {
  TrajectoryLog out = std::move(log_);
  log_ = TrajectoryLog{};
  log_.config_hash = out.config_hash;
  log_.dt = out.dt;
  log_.task = out.task;
  return out;
}

void Gateway::InstallCommand(const CommandMessage& msg) {
  operator_target_ = PoseApply(state_.executed_pose, msg.delta);
  plan_ = config_.bypass_filter
              ? InterpolateUnfiltered(msg.delta, config_.filter).substeps
              : ProcessCommand(msg.delta, config_.filter).substeps;
  plan_next_ = 0;
  plan_seq_ = msg.seq;
  if (msg.gripper) gripper_closed_ = *msg.gripper;
}

StateMessage Gateway::ControlTick() {
  std::optional<CommandMessage> command;
  bool reset = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    command = std::exchange(mailbox_, std::nullopt);
    reset = std::exchange(reset_requested_, false);
  }

  if (reset) {
    // Home was validated at construction, so this cannot fail.
    state_ = *sim_.Reset(config_.home);
    plan_.clear();
    plan_next_ = 0;
    plan_seq_.reset();
    operator_target_ = state_.executed_pose;
  }
  if (command && !state_.fault.tripped) InstallCommand(*command);

  const double dt = config_.filter.ControlPeriod();
  const Wrench wrench = WrenchAt(config_.wrench_schedule, tick_ * dt);
  if (wrench != state_.external_wrench) {
    state_ = sim_.ApplyWrench(state_, wrench);
  }

  DeltaPose substep;
  std::optional<int64_t> seq_active;
  if (plan_next_ < plan_.size() && !state_.fault.tripped) {
    substep = plan_[plan_next_++];
    seq_active = plan_seq_;
  }
  state_ = sim_.Step(state_, substep, dt);
  if (state_.fault.tripped) plan_next_ = plan_.size();
  ++tick_;

  LogSample sample;
  sample.t = static_cast<double>(tick_) * dt;
  sample.commanded = operator_target_;
  sample.executed = state_.executed_pose;
  sample.fault = state_.fault.ToString();
  sample.seq_active = seq_active;
  sample.gripper_closed = gripper_closed_;
  log_.samples.push_back(std::move(sample));

  plan_remaining_.store(static_cast<int>(plan_.size() - plan_next_));
  faulted_.store(state_.fault.tripped);
  StateMessage msg = MakeState();
  msg.seq_active = seq_active;
  {
    std::lock_guard<std::mutex> lock(mu_);
    latest_ = msg;
  }
  return msg;
}

StateMessage Gateway::MakeState() const {
  StateMessage msg;
  msg.tick = tick_;
  msg.sim_time_s = static_cast<double>(tick_) * config_.filter.ControlPeriod();
  msg.executed_pose = state_.executed_pose;
  msg.commanded_pose = operator_target_;
  msg.joint_positions = state_.q;
  msg.fault = state_.fault;
  msg.active_plan_remaining = static_cast<int>(plan_.size() - plan_next_);
  msg.gripper_closed = gripper_closed_;
  return msg;
}

}  // namespace telefilter
