// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/sode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dpmot/errors.hpp"

namespace dpmot::sode {

namespace {
constexpr double kDenomEps = 1e-9;

int farthest_step(const CameraModel& cam, double lambda_q) {
  return static_cast<int>(lambda_q * cam.img_h);
}
}  // namespace

double y_of_v(const CameraModel& cam, double v, double x, double z) {
  const Mat3 r = cam.rotation();
  const double r4 = r(1, 0), r5 = r(1, 1), r6 = r(1, 2);
  const double r7 = r(2, 0), r8 = r(2, 1), r9 = r(2, 2);
  const double denom = (cam.v_c - v) * r8 + cam.f * r5;
  if (std::abs(denom) < kDenomEps)
    throw DegenerateGeometry("viewing ray parallel to the ground plane");
  const double num = z * ((v - cam.v_c) * r9 - cam.f * r6) - cam.f * cam.height +
                     x * ((v - cam.v_c) * r7 - cam.f * r4);
  return num / denom;
}

DepthEstimate estimate_depth_static(const CameraModel& cam, double v_l,
                                    double x_world_hint, double lambda_q) {
  const Mat3 r = cam.rotation();
  const double r4 = r(1, 0), r6 = r(1, 2);
  const double r7 = r(2, 0), r9 = r(2, 2);
  const double denom = (v_l - cam.v_c) * r9 - cam.f * r6;
  if (std::abs(denom) < kDenomEps)
    throw DegenerateGeometry("bottom edge on the horizon line");
  DepthEstimate est;
  est.z_bar = (cam.f * cam.height +
               x_world_hint * (cam.f * r4 + (cam.v_c - v_l) * r7)) /
              denom;
  est.valid = est.z_bar > 0.0;
  est.z_hat = est.valid ? quantize_order(v_l, cam.img_h, lambda_q)
                        : farthest_step(cam, lambda_q);
  return est;
}

DepthEstimate estimate_depth_moving(const CameraModel& cam, double v_l,
                                    double lambda_q) {
  DepthEstimate est;
  if (v_l <= cam.v_c) {
    est.z_bar = std::numeric_limits<double>::infinity();
    est.valid = false;
    est.z_hat = farthest_step(cam, lambda_q);
    return est;
  }
  est.z_bar = cam.f * cam.height / (v_l - cam.v_c);
  est.valid = true;
  est.z_hat = quantize_order(v_l, cam.img_h, lambda_q);
  return est;
}

int quantize_order(double v_l, int img_h, double lambda_q) {
  const double clamped = std::clamp(v_l, 1.0, 1.5 * img_h);
  return static_cast<int>(std::floor(lambda_q * img_h / clamped));
}

std::vector<int> order_detections(std::vector<Detection>& dets,
                                  const CameraModel& cam,
                                  const OrderingParams& params) {
  for (auto& d : dets) {
    const double v_l = d.bbox.bottom();
    DepthEstimate est;
    if (params.moving_camera) {
      est = estimate_depth_moving(cam, v_l, params.lambda_q);
    } else {
      try {
        est = estimate_depth_static(cam, v_l, 0.0, params.lambda_q);
      } catch (const DegenerateGeometry&) {
        est.valid = false;
        est.z_hat = farthest_step(cam, params.lambda_q);
      }
    }
    d.depth_order = est.z_hat;
  }

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Detection& da = dets[a];
    const Detection& db = dets[b];
    if (da.depth_order != db.depth_order) return da.depth_order < db.depth_order;
    if (da.bbox.bottom() != db.bbox.bottom()) return da.bbox.bottom() > db.bbox.bottom();
    return da.bbox.x < db.bbox.x;
  });
  return order;
}

}  // namespace dpmot::sode
