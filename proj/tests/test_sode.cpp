// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dpmot/errors.hpp"
#include "dpmot/sode.hpp"
#include "dpmot/synth.hpp"

using namespace dpmot;

namespace {

CameraModel make_camera(double pitch = 0.0, double height = 1.5) {
  CameraModel cam = CameraModel::defaults(960, 540);
  cam.f = 1000.0;
  cam.height = height;
  cam.pitch = pitch;
  return cam;
}

Detection det_at(double bottom, double x = 0.0, double w = 20.0, double h = 40.0) {
  Detection d;
  d.bbox = {x - w / 2.0, bottom - h, w, h};
  return d;
}

}  // namespace

TEST(Sode, LevelCameraRecoversDepthFromProjection) {
  const CameraModel cam = make_camera();
  for (const double z : {2.0, 5.0, 12.5, 30.0, 49.0}) {
    const double v_l = cam.v_c + cam.f * cam.height / z;
    const auto est = sode::estimate_depth_static(cam, v_l);
    ASSERT_TRUE(est.valid);
    EXPECT_NEAR(est.z_bar, z, 1e-9);
  }
}

TEST(Sode, PitchedCameraRecoversDepthThroughTheProjector) {
  // cross-checked against the exact projective renderer, with lateral offset
  for (const double pitch_deg : {0.0, 5.0, 15.0}) {
    CameraModel cam = make_camera(pitch_deg * M_PI / 180.0, 2.0);
    for (const double z : {3.0, 8.0, 20.0, 45.0}) {
      for (const double x : {-4.0, 0.0, 3.0}) {
        const auto [u, v] = synth::project_point(cam, x, 0.0, z);
        (void)u;
        const auto est = sode::estimate_depth_static(cam, v, x);
        ASSERT_TRUE(est.valid) << "pitch " << pitch_deg << " z " << z;
        EXPECT_NEAR(est.z_bar, z, 1e-8);
      }
    }
  }
}

TEST(Sode, GroundHeightAlongTheRayMatchesProjection) {
  CameraModel cam = make_camera(0.1, 2.0);
  const double z = 10.0, h = 1.7;
  const auto [u_f, v_foot] = synth::project_point(cam, 0.0, 0.0, z);
  const auto [u_h, v_head] = synth::project_point(cam, 0.0, -h, z);
  (void)u_f;
  (void)u_h;
  EXPECT_NEAR(sode::y_of_v(cam, v_foot, 0.0, z), 0.0, 1e-9);
  EXPECT_NEAR(sode::y_of_v(cam, v_head, 0.0, z), -h, 1e-9);
}

TEST(Sode, HorizonRowDegenerates) {
  const CameraModel cam = make_camera();
  EXPECT_THROW(sode::estimate_depth_static(cam, cam.v_c), DegenerateGeometry);
}

TEST(Sode, AboveHorizonFallsIntoFarthestStep) {
  const CameraModel cam = make_camera();
  const auto est = sode::estimate_depth_static(cam, cam.v_c - 20.0);
  EXPECT_FALSE(est.valid);
  EXPECT_EQ(est.z_hat, static_cast<int>(10.0 * cam.img_h));
}

TEST(Sode, MovingCameraUsesTheIdentityRotationPath) {
  const CameraModel cam = make_camera(0.3 /* pitch ignored by this path */);
  const double z = 7.0;
  const double v_l = cam.v_c + cam.f * cam.height / z;
  const auto est = sode::estimate_depth_moving(cam, v_l);
  ASSERT_TRUE(est.valid);
  EXPECT_NEAR(est.z_bar, z, 1e-9);

  const auto bad = sode::estimate_depth_moving(cam, cam.v_c);
  EXPECT_FALSE(bad.valid);
  EXPECT_TRUE(std::isinf(bad.z_bar));
  EXPECT_EQ(bad.z_hat, static_cast<int>(10.0 * cam.img_h));
}

TEST(Sode, QuantizationFloorsAndClamps) {
  EXPECT_EQ(sode::quantize_order(540.0, 540), 10);
  EXPECT_EQ(sode::quantize_order(539.0, 540), 10);   // 5400/539 = 10.02 -> 10
  EXPECT_EQ(sode::quantize_order(490.0, 540), 11);   // 5400/490 = 11.02 -> 11
  EXPECT_EQ(sode::quantize_order(1200.0, 540), 6);   // clamped to 810
  EXPECT_EQ(sode::quantize_order(0.2, 540), 5400);   // clamped to 1
  EXPECT_EQ(sode::quantize_order(540.0, 540, 60.0), 60);
}

TEST(Sode, OrderingSortsNearFirstWithDeterministicTies) {
  const CameraModel cam = make_camera();
  std::vector<Detection> dets;
  dets.push_back(det_at(cam.v_c + 100.0, 5.0));   // far
  dets.push_back(det_at(cam.v_c + 300.0, 0.0));   // near
  dets.push_back(det_at(cam.v_c + 300.0, -3.0));  // same row, smaller x
  dets.push_back(det_at(cam.v_c + 180.0, 1.0));   // middle

  const auto order = sode::order_detections(dets, cam);
  ASSERT_EQ(order.size(), 4u);
  // rows 300,300 share a step; the x tie-break puts the smaller x first
  EXPECT_EQ(order[0], 2);
  EXPECT_EQ(order[1], 1);
  EXPECT_EQ(order[2], 3);
  EXPECT_EQ(order[3], 0);
  for (const auto& d : dets) EXPECT_GE(d.depth_order, 0);
  EXPECT_LT(dets[1].depth_order, dets[3].depth_order);
  EXPECT_LT(dets[3].depth_order, dets[0].depth_order);
}

TEST(Sode, SameStepOrdersByRawBottomRow) {
  // two rows close enough to share a quantized step still order by v_l
  const CameraModel cam = make_camera();
  std::vector<Detection> dets;
  dets.push_back(det_at(530.0));
  dets.push_back(det_at(533.0));
  ASSERT_EQ(sode::quantize_order(530.0, cam.img_h),
            sode::quantize_order(533.0, cam.img_h));
  const auto order = sode::order_detections(dets, cam);
  EXPECT_EQ(order[0], 1);  // larger bottom row = nearer
  EXPECT_EQ(order[1], 0);
}

TEST(Sode, MovingFlagSwitchesTheEstimatePath) {
  CameraModel cam = make_camera(0.2, 1.5);
  std::vector<Detection> dets{det_at(cam.v_c + 50.0), det_at(cam.v_c + 200.0)};
  sode::OrderingParams params;
  params.moving_camera = true;
  const auto order = sode::order_detections(dets, cam, params);
  EXPECT_EQ(order[0], 1);
  EXPECT_EQ(order[1], 0);
}
