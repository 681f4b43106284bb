// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <vector>

#include "dpmot/types.hpp"

// Subject-ordered depth estimation: recover a per-detection depth value from
// the ground-contact row of its box and the camera geometry, then quantize it
// into coarse integer steps so that downstream gating compares depth ranks
// rather than meters.
namespace dpmot::sode {

struct DepthEstimate {
  double z_bar{0.0};  // continuous depth, meters (camera-frame when valid)
  int z_hat{0};       // quantized step, small = near
  bool valid{false};  // false when the bottom edge sits at or above the horizon
};

// Height of the ground plane at image row v along the viewing ray through
// column-independent geometry; used to check where a pixel leaves the ground.
double y_of_v(const CameraModel& cam, double v, double x, double z);

// Depth of a ground contact seen at row v_l for a static camera. The x hint
// feeds the yaw/roll cross terms; with a level, unrotated camera it cancels.
DepthEstimate estimate_depth_static(const CameraModel& cam, double v_l,
                                    double x_world_hint = 0.0,
                                    double lambda_q = 10.0);

// Ego-motion variant: identity rotation, depth measured in the camera frame.
DepthEstimate estimate_depth_moving(const CameraModel& cam, double v_l,
                                    double lambda_q = 10.0);

// z_hat = floor(lambda_q * img_h / v_l), v_l clamped to [1, 1.5 * img_h].
int quantize_order(double v_l, int img_h, double lambda_q = 10.0);

struct OrderingParams {
  double lambda_q{10.0};
  bool moving_camera{false};
};

// Assigns Detection::depth_order in place and returns detection indices
// sorted nearest-first: (z_hat ascending, v_l descending, x ascending).
// Bottom edges at or above the horizon fall into the farthest step.
std::vector<int> order_detections(std::vector<Detection>& dets,
                                  const CameraModel& cam,
                                  const OrderingParams& params = {});

}  // namespace dpmot::sode
