// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "dpmot/errors.hpp"
#include "dpmot/kalman.hpp"

using namespace dpmot;

namespace {
BBox box_at(double cx, double cy, double s = 800.0, double r = 0.5) {
  return BBox::from_center_form(cx, cy, s, r);
}
}  // namespace

TEST(Kalman, InitialStateMirrorsTheMeasurement) {
  const BBox b{100, 50, 20, 40};
  const auto s = kalman::init_state(b, 7.0, {});
  EXPECT_DOUBLE_EQ(s.x(0), b.cx());
  EXPECT_DOUBLE_EQ(s.x(1), b.cy());
  EXPECT_DOUBLE_EQ(s.x(2), 7.0);
  EXPECT_DOUBLE_EQ(s.x(3), b.scale());
  EXPECT_DOUBLE_EQ(s.x(4), b.ratio());
  for (int i = 5; i < 9; ++i) EXPECT_DOUBLE_EQ(s.x(i), 0.0);

  const BBox back = kalman::state_box(s);
  EXPECT_NEAR(back.x, b.x, 1e-9);
  EXPECT_NEAR(back.h, b.h, 1e-9);
}

// The filter is block-diagonal across state pairs, so the horizontal-center
// block must reproduce an independently computed two-state filter exactly.
// Reference values: F=[[1,1],[0,1]], G=[0.5,1], Q=GG'+1e-6 I, H=[1 0], R=1,
// P0=diag(10,1000), measurements 1,2,3 after starting at 0.
TEST(Kalman, HorizontalBlockMatchesTwoStateReference) {
  kalman::KfParams params;
  params.sigma = 1.0;
  const kalman::KfModel model(params);
  auto s = kalman::init_state(box_at(0.0, 20.0), 5.0, params);

  for (int t = 1; t <= 3; ++t) {
    kalman::predict(s, model);
    const VecX z = model.measurement(box_at(static_cast<double>(t), 20.0), 5.0);
    kalman::update(s, model, z);
  }

  EXPECT_NEAR(s.x(0), 2.9996710828369078, 1e-9);
  EXPECT_NEAR(s.x(5), 0.999931805242167, 1e-9);
  EXPECT_NEAR(s.P(0, 0), 0.821088539475007, 1e-9);
  EXPECT_NEAR(s.P(0, 5), 0.5515276789849594, 1e-9);
  EXPECT_NEAR(s.P(5, 5), 1.0607396241324885, 1e-9);
}

TEST(Kalman, ConstantVelocityConvergesAfterTwoUpdates) {
  kalman::KfParams params;
  params.sigma = 0.0;
  params.r_diag.setConstant(1e-12);
  const kalman::KfModel model(params);

  const double dx = 3.0, dy = -2.0;
  auto pos = [&](int t) { return box_at(100.0 + dx * t, 200.0 + dy * t); };

  auto s = kalman::init_state(pos(0), 4.0, params);
  for (int t = 1; t <= 2; ++t) {
    kalman::predict(s, model);
    kalman::update(s, model, model.measurement(pos(t), 4.0));
  }
  kalman::predict(s, model);
  const BBox predicted = kalman::state_box(s);
  EXPECT_NEAR(predicted.cx(), pos(3).cx(), 1e-6);
  EXPECT_NEAR(predicted.cy(), pos(3).cy(), 1e-6);
}

TEST(Kalman, CovarianceStaysSymmetricPositiveSemidefinite) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::uniform_real_distribution<double> ctrl(-2.0, 2.0);

  kalman::KfParams params;
  const kalman::KfModel model(params);
  auto s = kalman::init_state(box_at(pos(rng), pos(rng)), 3.0, params);

  for (int i = 0; i < 1000; ++i) {
    const Vec3 u{ctrl(rng), ctrl(rng), ctrl(rng)};
    kalman::predict(s, model, u);
    kalman::update(s, model,
                   model.measurement(box_at(pos(rng), pos(rng)), 3.0 + ctrl(rng)));
    ASSERT_NEAR((s.P - s.P.transpose()).norm(), 0.0, 1e-9);
    Eigen::SelfAdjointEigenSolver<Mat9> eig(s.P);
    ASSERT_GT(eig.eigenvalues().minCoeff(), -1e-9) << "cycle " << i;
  }
}

TEST(Kalman, ControlAcceleratesTheMean) {
  kalman::KfParams params;
  params.sigma = 0.0;
  const kalman::KfModel model(params);
  auto s = kalman::init_state(box_at(0.0, 0.0), 0.0, params);

  const double a = 2.0;
  for (int k = 1; k <= 5; ++k) {
    kalman::predict(s, model, Vec3{a, 0.0, 0.0});
    // x_k = 0.5 a k^2 under pure constant-acceleration integration
    EXPECT_NEAR(s.x(0), 0.5 * a * k * k, 1e-9);
    EXPECT_NEAR(s.x(5), a * k, 1e-9);
  }
}

TEST(Kalman, ControlRecoveredFromCenterDeltas) {
  // constant acceleration: p(t) = 0.5 a t^2, so consecutive center deltas
  // differ by exactly a
  const double ax = 1.6, ay = -0.8;
  auto p = [&](int t) {
    return Vec2{0.5 * ax * t * t, 0.5 * ay * t * t};
  };
  kalman::MotionDeltas d{p(2) - p(1), p(3) - p(2)};
  const Vec3 u = kalman::estimate_control(d, 0.05, true);
  EXPECT_NEAR(u(0), ax, 1e-12);
  EXPECT_NEAR(u(1), ay, 1e-12);
  EXPECT_NEAR(u(2), 0.05 * ay, 1e-12);

  const Vec3 flat = kalman::estimate_control(std::nullopt, 0.05, true);
  EXPECT_DOUBLE_EQ(flat.norm(), 0.0);

  const Vec3 planar = kalman::estimate_control(d, 0.05, false);
  EXPECT_DOUBLE_EQ(planar(2), 0.0);
}

TEST(Kalman, DepthGammaFollowsTheQuantizationSlope) {
  // |d/dv (lambda H / v)| = lambda H / v^2, then into filter units
  const double g = kalman::depth_gamma(540.0, 540, 10.0, 5.4);
  EXPECT_NEAR(g, 10.0 * 540.0 / (540.0 * 540.0) * 5.4, 1e-12);
  // clamped row keeps the slope finite
  const double tiny = kalman::depth_gamma(1e-6, 540, 10.0, 1.0);
  EXPECT_NEAR(tiny, 10.0 * 540.0, 1e-6);
}

TEST(Kalman, ShrinkingScaleIsArrested) {
  kalman::KfParams params;
  const kalman::KfModel model(params);
  auto s = kalman::init_state(box_at(0.0, 0.0, 10.0, 1.0), 0.0, params);
  s.x(8) = -100.0;  // scale would go negative on the next step
  kalman::predict(s, model);
  const BBox b = kalman::state_box(s);
  EXPECT_GT(b.w, 0.0);
  EXPECT_GT(b.h, 0.0);
  EXPECT_GE(s.x(3), 0.0);
}

TEST(Kalman, SingularInnovationIsReported) {
  kalman::KfParams params;
  params.r_diag.setZero();
  const kalman::KfModel model(params);
  kalman::KfState s = kalman::init_state(box_at(0.0, 0.0), 0.0, params);
  s.P.setZero();  // no state uncertainty + no noise = singular innovation
  EXPECT_THROW(kalman::kalman_gain(s, model), SingularInnovation);
}

TEST(Kalman, PlanarModeDropsTheDepthRow) {
  kalman::KfParams params;
  params.use_depth = false;
  const kalman::KfModel model(params);
  EXPECT_EQ(model.meas_dim(), 4);
  const VecX z = model.measurement(box_at(10.0, 20.0, 800.0, 0.5), 99.0);
  ASSERT_EQ(z.size(), 4);
  EXPECT_DOUBLE_EQ(z(0), 10.0);
  EXPECT_DOUBLE_EQ(z(1), 20.0);
  EXPECT_DOUBLE_EQ(z(2), 800.0);  // scale follows the dropped depth row
  EXPECT_DOUBLE_EQ(z(3), 0.5);

  auto s = kalman::init_state(box_at(0.0, 0.0), 123.0, params);
  kalman::predict(s, model);
  kalman::update(s, model, model.measurement(box_at(1.0, 1.0), 0.0));
  EXPECT_DOUBLE_EQ(s.x(2), 123.0);  // depth state never touched
}

TEST(Kalman, NonFiniteStateIsRejected) {
  kalman::KfParams params;
  const kalman::KfModel model(params);
  auto s = kalman::init_state(box_at(0.0, 0.0), 0.0, params);
  s.x(0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(kalman::predict(s, model), NonFiniteState);
}
