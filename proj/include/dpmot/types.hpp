// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <Eigen/Dense>
#include <string>

namespace dpmot {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat93 = Eigen::Matrix<double, 9, 3>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Axis-aligned box in pixels, top-left origin, v grows downward.
struct BBox {
  double x{0}, y{0}, w{0}, h{0};

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double scale() const { return w * h; }        // s
  double ratio() const { return w / h; }        // r
  double bottom() const { return y + h; }       // v_l, the ground-contact row
  double right() const { return x + w; }

  // inverse of the (cx, cy, s, r) parameterization
  static BBox from_center_form(double cx, double cy, double s, double r);
};

double iou(const BBox& a, const BBox& b);

struct Detection {
  int frame{0};        // 1-based
  BBox bbox;
  double confidence{1.0};
  VecX embedding;      // size 0 when the detector provides none
  int depth_order{-1}; // quantized depth step, -1 until ordering ran
};

struct TrackRecord {
  int id{0};
  int frame{0};
  BBox bbox;
  double confidence{1.0};
};

struct SequenceInfo {
  std::string name;
  int img_w{0};
  int img_h{0};
  double frame_rate{30.0};
  int n_frames{0};
  int embedding_dim{0};  // 0 = sequence ships no embeddings
};

// R = R_z(roll) * R_y(yaw) * R_x(pitch), written out so the nine entries
// match the closed-form expansion used by the depth equations.
Mat3 rotation_matrix(double roll, double yaw, double pitch);

/// Pinhole camera above the ground plane y = 0. World +y points downward
/// (same sense as image v), so ground contacts sit at y = 0 and heads at
/// y = -height_of_subject. Translation is [0, height, 0].
struct CameraModel {
  double f{1000.0};       // focal length, pixels
  double u_c{0.0};        // principal point
  double v_c{0.0};
  double height{1.0};     // camera height above ground, meters
  double pitch{0.0};      // rotation about x, radians
  double yaw{0.0};        // about y
  double roll{0.0};       // about z
  int img_w{0};
  int img_h{0};

  Mat3 rotation() const { return rotation_matrix(roll, yaw, pitch); }
  Vec3 translation() const { return {0.0, height, 0.0}; }

  // f = img_h, principal point at the image center, 1 m high, level
  static CameraModel defaults(int img_w, int img_h);
};

}  // namespace dpmot
