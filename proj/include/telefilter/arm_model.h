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

#ifndef TELEFILTER_ARM_MODEL_H_
#define TELEFILTER_ARM_MODEL_H_

#include <array>
#include <numbers>
#include <optional>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "telefilter/geometry.h"

namespace telefilter {

inline constexpr int kNumJoints = 6;

using JointVector = Eigen::Matrix<double, kNumJoints, 1>;
using Jacobian = Eigen::Matrix<double, 6, kNumJoints>;

// Standard (distal) DH row: Rz(theta + theta_offset) Tz(d) Tx(a) Rx(alpha).
struct DHLink {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};
using DHParams = std::array<DHLink, kNumJoints>;

struct JointLimit {
  double q_min = -std::numbers::pi;
  double q_max = std::numbers::pi;
  double v_max = 1.0;  // rad/s
};
using JointLimits = std::array<JointLimit, kNumJoints>;

// Bundled 6-DoF geometry with a reach of about 0.9 m. q = 0 is the arm
// stretched straight up (an elbow and wrist singularity).
DHParams DefaultDHParams();
// Placeholder limits; real controller limits are vendor-private.
JointLimits DefaultJointLimits();
// Folded, well-conditioned start configuration, tool pointing down.
JointVector DefaultHome();

absl::Status ValidateDHParams(const DHParams& dh);
absl::Status ValidateJointLimits(const JointLimits& limits);

// Index of the first joint outside [q_min, q_max], if any.
std::optional<int> FirstLimitViolation(const JointLimits& limits,
                                       const JointVector& q);

Eigen::Isometry3d ForwardKinematicsTransform(const DHParams& dh,
                                             const JointVector& q);
Pose ForwardKinematics(const DHParams& dh, const JointVector& q);

// Rows 0-2 map joint rates to linear velocity of the end-effector point,
// rows 3-5 to angular velocity, both in the base frame.
Jacobian GeometricJacobian(const DHParams& dh, const JointVector& q);

struct ResolvedRateResult {
  JointVector dq = JointVector::Zero();
  // Distance between pose_apply(FK(q), dx) and FK(q + dq).
  double translation_residual_m = 0.0;
  double rotation_residual_rad = 0.0;
};

// Damped least squares: dq = J^T (J J^T + lambda^2 I)^-1 [dx.t; R dx.r].
// dx.rotation is body-frame and is rotated into the base frame first.
ResolvedRateResult ResolvedRateStep(const DHParams& dh, const JointVector& q,
                                    const DeltaPose& dx, double lambda);

}  // namespace telefilter

#endif  // TELEFILTER_ARM_MODEL_H_
