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

#ifndef TELEFILTER_GEOMETRY_H_
#define TELEFILTER_GEOMETRY_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "absl/status/statusor.h"

namespace telefilter {

// Positions are meters; rotation vectors are axis * angle in radians.
using Vec3 = Eigen::Vector3d;

// Below this angle the exp/log maps switch to their Taylor branches.
inline constexpr double kSmallAngle = 1e-8;

bool IsFinite(const Vec3& v);

// Rejects NaN/Inf components. Every externally supplied vector (wire
// messages, config, log files) goes through here.
absl::StatusOr<Vec3> MakeVec3(double x, double y, double z);

// Unit quaternion kept normalized and in the w >= 0 hemisphere so that
// equal rotations compare equal.
class UnitQuaternion {
 public:
  UnitQuaternion() : q_(Eigen::Quaterniond::Identity()) {}
  explicit UnitQuaternion(const Eigen::Quaterniond& q);
  UnitQuaternion(double w, double x, double y, double z)
      : UnitQuaternion(Eigen::Quaterniond(w, x, y, z)) {}

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  const Eigen::Quaterniond& coeffs() const { return q_; }
  Eigen::Matrix3d ToRotationMatrix() const { return q_.toRotationMatrix(); }

  UnitQuaternion Inverse() const;
  UnitQuaternion operator*(const UnitQuaternion& rhs) const;
  Vec3 Rotate(const Vec3& v) const { return q_ * v; }

  friend bool operator==(const UnitQuaternion& a, const UnitQuaternion& b) {
    return a.q_.coeffs() == b.q_.coeffs();
  }

 private:
  Eigen::Quaterniond q_;
};

struct Pose {
  Vec3 position = Vec3::Zero();
  UnitQuaternion orientation;
};

// Relative pose command. `translation` is expressed in the base frame;
// `rotation` is a rotation vector in the body frame of the pose it is
// applied to. |rotation| <= pi after WrapRotationVector.
struct DeltaPose {
  Vec3 translation = Vec3::Zero();
  Vec3 rotation = Vec3::Zero();

  static DeltaPose Zero() { return {}; }
  bool IsZero() const {
    return translation.isZero(0.0) && rotation.isZero(0.0);
  }
};

// Maps any rotation vector onto the equivalent one with angle in [0, pi].
Vec3 WrapRotationVector(const Vec3& r);

UnitQuaternion RotvecToQuat(const Vec3& r);
Vec3 QuatToRotvec(const UnitQuaternion& q);

// pose_apply(current, PoseDiff(target, current)) == target.
DeltaPose PoseDiff(const Pose& target, const Pose& current);
Pose PoseApply(const Pose& base, const DeltaPose& delta);

// Geodesic angle between two orientations, radians in [0, pi].
double AngularDistance(const UnitQuaternion& a, const UnitQuaternion& b);

}  // namespace telefilter

#endif  // TELEFILTER_GEOMETRY_H_
