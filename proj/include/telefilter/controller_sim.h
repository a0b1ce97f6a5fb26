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

#ifndef TELEFILTER_CONTROLLER_SIM_H_
#define TELEFILTER_CONTROLLER_SIM_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "telefilter/arm_model.h"
#include "telefilter/geometry.h"

namespace telefilter {

// Force (N) then torque (N*m).
using Wrench = Eigen::Matrix<double, 6, 1>;

enum class FaultReason {
  kNone,
  kJointVelocityExceeded,
  kJointLimitViolated,
  kTrackingDiverged,
};

struct FaultStatus {
  bool tripped = false;
  FaultReason reason = FaultReason::kNone;
  int joint = -1;  // set for the per-joint reasons
  double at_time = 0.0;

  static FaultStatus Ok() { return {}; }
  // "ok", "joint_velocity_exceeded:<j>", "joint_limit_violated:<j>",
  // "tracking_diverged".
  std::string ToString() const;
};

// Diagonal stiffness: N/m on the translation rows, N*m/rad on rotation rows.
struct StiffnessParams {
  bool enabled = false;
  Eigen::Matrix<double, 6, 1> diagonal =
      Eigen::Matrix<double, 6, 1>::Constant(1000.0);
};

absl::Status ValidateStiffness(const StiffnessParams& stiffness);

// Linear spring deflection K^-1 * wrench; zero when stiffness is disabled.
DeltaPose ComplianceOffset(const StiffnessParams& stiffness,
                           const Wrench& wrench);

// Piecewise-constant external wrench, active on [start_s, end_s).
struct WrenchSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  Wrench wrench = Wrench::Zero();
};
using WrenchSchedule = std::vector<WrenchSegment>;

// First segment covering t, or zero.
Wrench WrenchAt(const WrenchSchedule& schedule, double t);

struct ControllerConfig {
  DHParams dh = DefaultDHParams();
  JointLimits limits = DefaultJointLimits();
  double damping = 1e-3;
  StiffnessParams stiffness;
  // Simulator stand-in for the vendor's internal tracking checks.
  double tracking_residual_bound_m = 0.005;
  int tracking_residual_steps = 10;
};

absl::Status ValidateControllerConfig(const ControllerConfig& config);

struct ArmState {
  JointVector q = JointVector::Zero();
  JointVector dq = JointVector::Zero();  // rad/s over the last step
  Pose commanded_pose;                   // controller setpoint
  Pose executed_pose;                    // FK(q) with compliance offset
  FaultStatus fault;
  Wrench external_wrench = Wrench::Zero();
  double sim_time = 0.0;
  int diverged_steps = 0;
};

// Kinematic stand-in for an industrial position controller: substeps are
// tracked with damped resolved-rate IK, and a step whose joint rates exceed
// v_max (the kinematic proxy for torque saturation) or leaves the joint
// limits trips a fault instead of moving.
class ControllerSim {
 public:
  explicit ControllerSim(ControllerConfig config) : config_(std::move(config)) {}

  const ControllerConfig& config() const { return config_; }

  absl::StatusOr<ArmState> Reset(const JointVector& home) const;

  // A tripped state is returned unchanged.
  ArmState Step(const ArmState& state, const DeltaPose& substep,
                double dt) const;

  // Replaces the external wrench and recomputes the executed pose.
  ArmState ApplyWrench(const ArmState& state, const Wrench& wrench) const;

 private:
  Pose ExecutedPose(const JointVector& q, const Wrench& wrench) const;

  ControllerConfig config_;
};

}  // namespace telefilter

#endif  // TELEFILTER_CONTROLLER_SIM_H_
