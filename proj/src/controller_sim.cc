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

#include "telefilter/controller_sim.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace telefilter {

std::string FaultStatus::ToString() const {
  if (!tripped) return "ok";
  switch (reason) {
    case FaultReason::kJointVelocityExceeded:
      return absl::StrCat("joint_velocity_exceeded:", joint);
    case FaultReason::kJointLimitViolated:
      return absl::StrCat("joint_limit_violated:", joint);
    case FaultReason::kTrackingDiverged:
      return "tracking_diverged";
    case FaultReason::kNone:
      break;
  }
  return "tripped";
}

absl::Status ValidateStiffness(const StiffnessParams& stiffness) {
  if (!stiffness.enabled) return absl::OkStatus();
  for (int i = 0; i < 6; ++i) {
    const double k = stiffness.diagonal[i];
    if (!std::isfinite(k) || k <= 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "stiffness.diagonal[", i, "]: must be > 0 when enabled"));
    }
  }
  return absl::OkStatus();
}

DeltaPose ComplianceOffset(const StiffnessParams& stiffness,
                           const Wrench& wrench) {
  DeltaPose offset;
  if (!stiffness.enabled) return offset;
  const Eigen::Matrix<double, 6, 1> deflection =
      wrench.cwiseQuotient(stiffness.diagonal);
  offset.translation = deflection.head<3>();
  offset.rotation = deflection.tail<3>();
  return offset;
}

Wrench WrenchAt(const WrenchSchedule& schedule, double t) {
  for (const WrenchSegment& seg : schedule) {
    if (t >= seg.start_s && t < seg.end_s) return seg.wrench;
  }
  return Wrench::Zero();
}

absl::Status ValidateControllerConfig(const ControllerConfig& config) {
  if (auto s = ValidateDHParams(config.dh); !s.ok()) return s;
  if (auto s = ValidateJointLimits(config.limits); !s.ok()) return s;
  if (auto s = ValidateStiffness(config.stiffness); !s.ok()) return s;
  if (!std::isfinite(config.damping) || config.damping <= 0.0) {
    return absl::InvalidArgumentError("arm.damping: must be > 0");
  }
  if (!std::isfinite(config.tracking_residual_bound_m) ||
      config.tracking_residual_bound_m <= 0.0) {
    return absl::InvalidArgumentError(
        "controller.tracking_residual_bound_m: must be > 0");
  }
  if (config.tracking_residual_steps < 1) {
    return absl::InvalidArgumentError(
        "controller.tracking_residual_steps: must be >= 1");
  }
  return absl::OkStatus();
}

Pose ControllerSim::ExecutedPose(const JointVector& q,
                                 const Wrench& wrench) const {
  return PoseApply(ForwardKinematics(config_.dh, q),
                   ComplianceOffset(config_.stiffness, wrench));
}

absl::StatusOr<ArmState> ControllerSim::Reset(const JointVector& home) const {
  if (!home.allFinite()) {
    return absl::InvalidArgumentError("home: non-finite joint value");
  }
  if (auto joint = FirstLimitViolation(config_.limits, home)) {
    return absl::InvalidArgumentError(
        absl::StrCat("home[", *joint, "]: outside joint limits [",
                     config_.limits[*joint].q_min, ", ",
                     config_.limits[*joint].q_max, "]"));
  }
  ArmState state;
  state.q = home;
  state.commanded_pose = ForwardKinematics(config_.dh, home);
  state.executed_pose = ExecutedPose(home, Wrench::Zero());
  return state;
}

ArmState ControllerSim::ApplyWrench(const ArmState& state,
                                    const Wrench& wrench) const {
  ArmState next = state;
  next.external_wrench = wrench;
  next.executed_pose = ExecutedPose(next.q, wrench);
  return next;
}

ArmState ControllerSim::Step(const ArmState& state, const DeltaPose& substep,
                             double dt) const {
  if (state.fault.tripped) return state;

  ArmState next = state;
  next.sim_time = state.sim_time + dt;

  const Pose target = PoseApply(state.commanded_pose, substep);
  const Pose kinematic = ForwardKinematics(config_.dh, state.q);
  const ResolvedRateResult rr = ResolvedRateStep(
      config_.dh, state.q, PoseDiff(target, kinematic), config_.damping);

  for (int i = 0; i < kNumJoints; ++i) {
    if (std::abs(rr.dq[i]) / dt > config_.limits[i].v_max) {
      next.fault = {true, FaultReason::kJointVelocityExceeded, i,
                    next.sim_time};
      next.dq.setZero();
      return next;
    }
  }
  const JointVector q_next = state.q + rr.dq;
  if (auto joint = FirstLimitViolation(config_.limits, q_next)) {
    next.fault = {true, FaultReason::kJointLimitViolated, *joint,
                  next.sim_time};
    next.dq.setZero();
    return next;
  }

  next.q = q_next;
  next.dq = rr.dq / dt;
  next.commanded_pose = target;
  next.executed_pose = ExecutedPose(q_next, state.external_wrench);

  if (rr.translation_residual_m > config_.tracking_residual_bound_m) {
    ++next.diverged_steps;
    if (next.diverged_steps >= config_.tracking_residual_steps) {
      next.fault = {true, FaultReason::kTrackingDiverged, -1, next.sim_time};
    }
  } else {
    next.diverged_steps = 0;
  }
  return next;
}

}  // namespace telefilter
