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

#include "telefilter/arm_model.h"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "absl/strings/str_cat.h"

namespace telefilter {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Eigen::Isometry3d LinkTransform(const DHLink& link, double q) {
  const double theta = q + link.theta_offset;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(link.alpha), sa = std::sin(link.alpha);
  Eigen::Matrix4d m;
  m << ct, -st * ca, st * sa, link.a * ct,  //
      st, ct * ca, -ct * sa, link.a * st,   //
      0.0, sa, ca, link.d,                  //
      0.0, 0.0, 0.0, 1.0;
  return Eigen::Isometry3d(m);
}

}  // namespace

DHParams DefaultDHParams() {
  return {{
      {0.0, kHalfPi, 0.35, 0.0},
      {0.41, 0.0, 0.0, kHalfPi},
      {0.0, kHalfPi, 0.0, kHalfPi},
      {0.0, -kHalfPi, 0.40, 0.0},
      {0.0, kHalfPi, 0.0, 0.0},
      {0.0, 0.0, 0.09, 0.0},
  }};
}

JointLimits DefaultJointLimits() {
  return {{
      {-2.96, 2.96, 1.0},
      {-2.0, 2.0, 1.0},
      {-2.6, 2.6, 1.2},
      {-3.05, 3.05, 2.0},
      {-2.1, 2.1, 2.0},
      {-6.28, 6.28, 2.5},
  }};
}

JointVector DefaultHome() {
  JointVector q;
  q << 0.0, -0.1, -1.7, 0.0, -1.3, 0.0;
  return q;
}

absl::Status ValidateDHParams(const DHParams& dh) {
  for (int i = 0; i < kNumJoints; ++i) {
    const DHLink& l = dh[i];
    if (!std::isfinite(l.a) || !std::isfinite(l.alpha) ||
        !std::isfinite(l.d) || !std::isfinite(l.theta_offset)) {
      return absl::InvalidArgumentError(
          absl::StrCat("arm.dh[", i, "]: non-finite parameter"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateJointLimits(const JointLimits& limits) {
  for (int i = 0; i < kNumJoints; ++i) {
    const JointLimit& l = limits[i];
    if (!std::isfinite(l.q_min) || !std::isfinite(l.q_max) ||
        !(l.q_min < l.q_max)) {
      return absl::InvalidArgumentError(
          absl::StrCat("arm.limits[", i, "]: need finite q_min < q_max"));
    }
    if (!std::isfinite(l.v_max) || !(l.v_max > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("arm.limits[", i, "].v_max: must be > 0"));
    }
  }
  return absl::OkStatus();
}

std::optional<int> FirstLimitViolation(const JointLimits& limits,
                                       const JointVector& q) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < limits[i].q_min || q[i] > limits[i].q_max) return i;
  }
  return std::nullopt;
}

Eigen::Isometry3d ForwardKinematicsTransform(const DHParams& dh,
                                             const JointVector& q) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (int i = 0; i < kNumJoints; ++i) t = t * LinkTransform(dh[i], q[i]);
  return t;
}

Pose ForwardKinematics(const DHParams& dh, const JointVector& q) {
  const Eigen::Isometry3d t = ForwardKinematicsTransform(dh, q);
  return Pose{t.translation(), UnitQuaternion(Eigen::Quaterniond(t.linear()))};
}

Jacobian GeometricJacobian(const DHParams& dh, const JointVector& q) {
  std::array<Eigen::Isometry3d, kNumJoints + 1> frames;
  frames[0] = Eigen::Isometry3d::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    frames[i + 1] = frames[i] * LinkTransform(dh[i], q[i]);
  }
  const Eigen::Vector3d tip = frames[kNumJoints].translation();
  Jacobian j;
  for (int i = 0; i < kNumJoints; ++i) {
    // Joint i rotates about z of frame i (the frame before its link).
    const Eigen::Vector3d axis = frames[i].linear().col(2);
    const Eigen::Vector3d origin = frames[i].translation();
    j.block<3, 1>(0, i) = axis.cross(tip - origin);
    j.block<3, 1>(3, i) = axis;
  }
  return j;
}

ResolvedRateResult ResolvedRateStep(const DHParams& dh, const JointVector& q,
                                    const DeltaPose& dx, double lambda) {
  ResolvedRateResult result;
  if (dx.IsZero()) return result;

  const Pose start = ForwardKinematics(dh, q);
  Eigen::Matrix<double, 6, 1> twist;
  twist.head<3>() = dx.translation;
  twist.tail<3>() = start.orientation.Rotate(dx.rotation);

  const Jacobian j = GeometricJacobian(dh, q);
  const Eigen::Matrix<double, 6, 6> normal =
      j * j.transpose() +
      (lambda * lambda) * Eigen::Matrix<double, 6, 6>::Identity();
  result.dq = j.transpose() * normal.ldlt().solve(twist);

  const Pose requested = PoseApply(start, dx);
  const Pose achieved = ForwardKinematics(dh, q + result.dq);
  const DeltaPose err = PoseDiff(requested, achieved);
  result.translation_residual_m = err.translation.norm();
  result.rotation_residual_rad = err.rotation.norm();
  return result;
}

}  // namespace telefilter
