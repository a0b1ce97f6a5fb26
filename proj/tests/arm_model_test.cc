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
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace telefilter {
namespace {

using testing::kPi;
using testing::RandomJoints;
using testing::RandomVec;

using testing::SmallestSingularValue;

TEST(ForwardKinematicsTest, SingleLink) {
  DHParams dh{};
  dh[0].a = 1.0;
  const Pose p = ForwardKinematics(dh, JointVector::Zero());
  EXPECT_NEAR((p.position - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(p.orientation, UnitQuaternion());
}

TEST(ForwardKinematicsTest, MatchesMatrixProductOracle) {
  const DHParams dh = DefaultDHParams();
  std::mt19937_64 rng(201);
  std::vector<JointVector> configs = {JointVector::Zero(), DefaultHome()};
  for (int i = 0; i < 200; ++i) {
    configs.push_back(RandomJoints(rng, DefaultJointLimits()));
  }
  for (const JointVector& q : configs) {
    const testing::M4 ref = testing::ReferenceFk(dh, q);
    const Eigen::Isometry3d t = ForwardKinematicsTransform(dh, q);
    const Pose p = ForwardKinematics(dh, q);
    const Eigen::Matrix3d r = p.orientation.ToRotationMatrix();
    for (int i = 0; i < 3; ++i) {
      ASSERT_NEAR(p.position[i], ref[i][3], 1e-9);
      for (int j = 0; j < 4; ++j) ASSERT_NEAR(t.matrix()(i, j), ref[i][j], 1e-9);
      for (int j = 0; j < 3; ++j) ASSERT_NEAR(r(i, j), ref[i][j], 1e-9);
    }
  }
}

TEST(ForwardKinematicsTest, StretchedReach) {
  // Straight up at q = 0: base height plus both arm segments plus the tool.
  const Pose p = ForwardKinematics(DefaultDHParams(), JointVector::Zero());
  EXPECT_NEAR(p.position.z(), 0.35 + 0.41 + 0.40 + 0.09, 1e-12);
  EXPECT_NEAR(p.position.head<2>().norm(), 0.0, 1e-12);
}

TEST(ForwardKinematicsTest, PeriodicInContinuousJoint) {
  const DHParams dh = DefaultDHParams();
  std::mt19937_64 rng(202);
  for (int i = 0; i < 50; ++i) {
    JointVector q = RandomJoints(rng, DefaultJointLimits());
    JointVector q2 = q;
    q2[5] += 2 * kPi;
    const Pose a = ForwardKinematics(dh, q);
    const Pose b = ForwardKinematics(dh, q2);
    EXPECT_LT((a.position - b.position).norm(), 1e-9);
    EXPECT_LT(AngularDistance(a.orientation, b.orientation), 1e-9);
  }
}

TEST(ForwardKinematicsTest, BitStable) {
  const JointVector q = DefaultHome();
  const Pose a = ForwardKinematics(DefaultDHParams(), q);
  const Pose b = ForwardKinematics(DefaultDHParams(), q);
  EXPECT_EQ(a.position, b.position);
  EXPECT_EQ(a.orientation, b.orientation);
}

TEST(GeometricJacobianTest, MatchesCentralDifferences) {
  const DHParams dh = DefaultDHParams();
  const double h = 1e-6;
  std::mt19937_64 rng(203);
  for (int n = 0; n < 100; ++n) {
    const JointVector q = RandomJoints(rng, DefaultJointLimits());
    const Jacobian j = GeometricJacobian(dh, q);
    for (int i = 0; i < kNumJoints; ++i) {
      JointVector qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const testing::M4 tp = testing::ReferenceFk(dh, qp);
      const testing::M4 tm = testing::ReferenceFk(dh, qm);
      // Angular rate in the base frame: log(R+ R-^T) / 2h.
      testing::M4 rel{};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          for (int k = 0; k < 3; ++k) rel[r][c] += tp[r][k] * tm[c][k];
        }
      }
      const testing::A3 w = testing::RotationLog(rel);
      for (int r = 0; r < 3; ++r) {
        ASSERT_NEAR(j(r, i), (tp[r][3] - tm[r][3]) / (2 * h), 1e-6)
            << "config " << n << " joint " << i;
        ASSERT_NEAR(j(3 + r, i), w[r] / (2 * h), 1e-6)
            << "config " << n << " joint " << i;
      }
    }
  }
}

TEST(GeometricJacobianTest, StretchedArmIsSingular) {
  const Jacobian j = GeometricJacobian(DefaultDHParams(), JointVector::Zero());
  EXPECT_LT(SmallestSingularValue(j), 1e-8);
  const Jacobian home = GeometricJacobian(DefaultDHParams(), DefaultHome());
  EXPECT_GT(SmallestSingularValue(home), 1e-2);
}

TEST(GeometricJacobianTest, WristAxisThroughToolPointHasNoLinearPart) {
  // The last joint rotates about the tool axis, which contains the
  // end-effector point.
  std::mt19937_64 rng(204);
  for (int n = 0; n < 50; ++n) {
    const JointVector q = RandomJoints(rng, DefaultJointLimits());
    const Jacobian j = GeometricJacobian(DefaultDHParams(), q);
    EXPECT_LT(j.block(0, 5, 3, 1).norm(), 1e-12);
  }
}

TEST(ResolvedRateStepTest, ZeroDeltaGivesZero) {
  const ResolvedRateResult r = ResolvedRateStep(
      DefaultDHParams(), DefaultHome(), DeltaPose::Zero(), 1e-3);
  EXPECT_TRUE(r.dq.isZero(0.0));
  EXPECT_EQ(r.translation_residual_m, 0.0);
}

TEST(ResolvedRateStepTest, SmallDeltaConvergesAwayFromSingularity) {
  const DHParams dh = DefaultDHParams();
  std::mt19937_64 rng(205);
  int checked = 0;
  while (checked < 100) {
    const JointVector q = RandomJoints(rng, DefaultJointLimits(), 0.2);
    if (SmallestSingularValue(GeometricJacobian(dh, q)) < 0.05) continue;
    DeltaPose dx{RandomVec(rng, 1e-3), RandomVec(rng, 2e-3)};
    const ResolvedRateResult r = ResolvedRateStep(dh, q, dx, 1e-4);
    const Pose want = PoseApply(ForwardKinematics(dh, q), dx);
    const Pose got = ForwardKinematics(dh, q + r.dq);
    ASSERT_LT((got.position - want.position).norm(), 1e-5);
    ASSERT_LT(AngularDistance(got.orientation, want.orientation), 1e-4);
    EXPECT_NEAR(r.translation_residual_m,
                (got.position - want.position).norm(), 1e-15);
    ++checked;
  }
}

TEST(ResolvedRateStepTest, BoundedAtStretchedSingularity) {
  const DHParams dh = DefaultDHParams();
  const JointVector q = JointVector::Zero();
  const double lambda = 1e-3;
  const Jacobian j = GeometricJacobian(dh, q);
  for (double mag : {1e-4, 1e-2, 1.0}) {
    DeltaPose dx;
    dx.translation = Vec3(0, 0, mag);  // straight out along the arm
    const ResolvedRateResult r = ResolvedRateStep(dh, q, dx, lambda);
    ASSERT_TRUE(r.dq.allFinite());
    const double bound = j.transpose().norm() * mag / (lambda * lambda);
    EXPECT_LE(r.dq.norm(), bound);
    // The arm cannot extend further, so the step under-achieves.
    EXPECT_GT(r.translation_residual_m, 0.5 * mag);
  }
}

TEST(ResolvedRateStepTest, AlwaysFinite) {
  const DHParams dh = DefaultDHParams();
  std::mt19937_64 rng(206);
  for (int n = 0; n < 500; ++n) {
    JointVector q = RandomJoints(rng, DefaultJointLimits());
    if (n % 10 == 0) q.setZero();
    DeltaPose dx{RandomVec(rng, 100.0), RandomVec(rng, 3.0)};
    const ResolvedRateResult r =
        ResolvedRateStep(dh, q, dx, testing::Uniform(rng, 1e-6, 1e-1));
    ASSERT_TRUE(r.dq.allFinite());
    ASSERT_TRUE(std::isfinite(r.translation_residual_m));
    ASSERT_TRUE(std::isfinite(r.rotation_residual_rad));
  }
}

TEST(ValidationTest, DhAndLimits) {
  EXPECT_TRUE(ValidateDHParams(DefaultDHParams()).ok());
  DHParams dh = DefaultDHParams();
  dh[2].d = std::nan("");
  EXPECT_FALSE(ValidateDHParams(dh).ok());

  EXPECT_TRUE(ValidateJointLimits(DefaultJointLimits()).ok());
  JointLimits limits = DefaultJointLimits();
  limits[1].q_min = limits[1].q_max;
  EXPECT_FALSE(ValidateJointLimits(limits).ok());
  limits = DefaultJointLimits();
  limits[4].v_max = 0.0;
  EXPECT_FALSE(ValidateJointLimits(limits).ok());
}

TEST(ValidationTest, FirstLimitViolation) {
  const JointLimits limits = DefaultJointLimits();
  EXPECT_FALSE(FirstLimitViolation(limits, DefaultHome()).has_value());
  JointVector q = DefaultHome();
  q[3] = limits[3].q_max + 1e-9;
  q[4] = limits[4].q_min - 1.0;
  EXPECT_EQ(FirstLimitViolation(limits, q), 3);
}

}  // namespace
}  // namespace telefilter
