// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/types.hpp"

#include <algorithm>
#include <cmath>

namespace dpmot {

BBox BBox::from_center_form(double cx, double cy, double s, double r) {
  const double w = std::sqrt(s * r);
  const double h = std::sqrt(s / r);
  return {cx - 0.5 * w, cy - 0.5 * h, w, h};
}

double iou(const BBox& a, const BBox& b) {
  const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

Mat3 rotation_matrix(double roll, double yaw, double pitch) {
  const double cz = std::cos(roll), sz = std::sin(roll);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cx = std::cos(pitch), sx = std::sin(pitch);
  Mat3 r;
  r << cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx,
       sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx,
       -sy,     cy * sx,                cy * cx;
  return r;
}

CameraModel CameraModel::defaults(int img_w, int img_h) {
  CameraModel cam;
  cam.f = static_cast<double>(img_h);
  cam.u_c = 0.5 * img_w;
  cam.v_c = 0.5 * img_h;
  cam.height = 1.0;
  cam.img_w = img_w;
  cam.img_h = img_h;
  return cam;
}

}  // namespace dpmot
