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

#include "telefilter/geometry.h"

#include <cmath>
#include <numbers>
#include <limits>

#include "absl/strings/str_cat.h"

namespace telefilter {

bool IsFinite(const Vec3& v) { return v.allFinite(); }

absl::StatusOr<Vec3> MakeVec3(double x, double y, double z) {
  Vec3 v(x, y, z);
  if (!IsFinite(v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("non-finite vector component in (", x, ", ", y, ", ", z,
                     ")"));
  }
  return v;
}

UnitQuaternion::UnitQuaternion(const Eigen::Quaterniond& q) : q_(q) {
  // Renormalizing an already unit quaternion can move it by an ulp, which
  // would break exact round trips through text.
  if (std::abs(q_.squaredNorm() - 1.0) >
      4 * std::numeric_limits<double>::epsilon()) {
    q_.normalize();
  }
  if (q_.w() < 0.0) q_.coeffs() = -q_.coeffs();
}

UnitQuaternion UnitQuaternion::Inverse() const {
  return UnitQuaternion(q_.conjugate());
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& rhs) const {
  return UnitQuaternion(q_ * rhs.q_);
}

Vec3 WrapRotationVector(const Vec3& r) {
  const double angle = r.norm();
  if (angle <= std::numbers::pi) return r;
  const double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, two_pi);
  // wrapped in [0, 2pi); angles past pi flip to the opposite axis.
  if (wrapped > std::numbers::pi) wrapped -= two_pi;
  return r * (wrapped / angle);
}

UnitQuaternion RotvecToQuat(const Vec3& r) {
  const double angle = r.norm();
  if (angle < kSmallAngle) {
    const double a2 = angle * angle;
    const Vec3 v = r * (0.5 - a2 / 48.0);
    return UnitQuaternion(1.0 - a2 / 8.0, v.x(), v.y(), v.z());
  }
  const double half = 0.5 * angle;
  const Vec3 v = r * (std::sin(half) / angle);
  return UnitQuaternion(std::cos(half), v.x(), v.y(), v.z());
}

Vec3 QuatToRotvec(const UnitQuaternion& q) {
  const Vec3 v(q.x(), q.y(), q.z());
  const double s = v.norm();
  const double w = q.w();  // >= 0 by construction
  const double angle = 2.0 * std::atan2(s, w);
  if (angle < kSmallAngle) {
    // angle / s expanded around s = 0.
    return v * (2.0 / w) * (1.0 - (s * s) / (3.0 * w * w));
  }
  return v * (angle / s);
}

DeltaPose PoseDiff(const Pose& target, const Pose& current) {
  DeltaPose d;
  d.translation = target.position - current.position;
  d.rotation =
      QuatToRotvec(current.orientation.Inverse() * target.orientation);
  return d;
}

Pose PoseApply(const Pose& base, const DeltaPose& delta) {
  Pose p;
  p.position = base.position + delta.translation;
  p.orientation = base.orientation * RotvecToQuat(delta.rotation);
  return p;
}

double AngularDistance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return QuatToRotvec(a.Inverse() * b).norm();
}

}  // namespace telefilter
