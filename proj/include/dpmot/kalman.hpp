// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <optional>

#include "dpmot/types.hpp"

// Pseudo-3D constant-velocity Kalman filter with an optional acceleration
// control term. State layout:
//   [c_x, c_y, z, s, r, c_x', c_y', z', s']
// where z is the quantized depth step expressed in pixel-comparable units
// (step * depth_unit_weight) so that one covariance scale fits all axes.
namespace dpmot::kalman {

struct KfState {
  Vec9 x = Vec9::Zero();
  Mat9 P = Mat9::Zero();
};

struct KfParams {
  double dt{1.0};
  double sigma{1.0};      // control noise scale feeding Q
  bool use_depth{true};   // false drops the depth row from the measurement
  double q_reg{1e-6};     // diagonal regularizer added to Q

  // initial covariance diagonal: loose on velocities, tight on ratio
  Vec9 p0 = (Vec9() << 10, 10, 10, 100, 0.01, 1000, 1000, 1000, 1000).finished();

  // measurement noise for [c_x, c_y, z, s, r]
  Eigen::Matrix<double, 5, 1> r_diag =
      (Eigen::Matrix<double, 5, 1>() << 1, 1, 1, 10, 0.01).finished();
};

class KfModel {
 public:
  explicit KfModel(const KfParams& params = {});

  const Mat9& F() const { return f_; }
  const Mat93& G() const { return g_; }
  const Mat9& Q() const { return q_; }
  const MatX& H() const { return h_; }  // 5x9, or 4x9 without depth
  const MatX& R() const { return r_; }
  int meas_dim() const { return static_cast<int>(h_.rows()); }
  const KfParams& params() const { return params_; }

  // measurement vector for a detection; scaled_depth = z_hat * w_z
  VecX measurement(const BBox& box, double scaled_depth) const;

 private:
  KfParams params_;
  Mat9 f_;
  Mat93 g_;
  Mat9 q_;
  MatX h_;
  MatX r_;
};

KfState init_state(const BBox& box, double scaled_depth, const KfParams& params = {});

// x <- F x + G u, P <- F P F' + Q, then re-symmetrized.
void predict(KfState& s, const KfModel& m, const Vec3& u = Vec3::Zero());

// K = P H' (H P H' + R)^-1; throws SingularInnovation when the innovation
// covariance is numerically singular (condition estimate above 1e12).
MatX kalman_gain(const KfState& s, const KfModel& m);

void update(KfState& s, const KfModel& m, const VecX& z);

// box materialized from the state; scale and ratio floored at a tiny
// positive value so emitted geometry stays well formed
BBox state_box(const KfState& s);

struct MotionDeltas {
  Vec2 prev;  // center displacement into the newest observed frame
  Vec2 next;  // displacement out of it (or the best available stand-in)
};

// |d z_hat / d v| of the quantization map at row v_l, scaled into filter units
double depth_gamma(double v_l, int img_h, double lambda_q, double w_z);

// u = [dx_next - dx_prev, dy_next - dy_prev, gamma * (dy_next - dy_prev)];
// zero when no deltas are available (fewer than 3 frames of history).
Vec3 estimate_control(const std::optional<MotionDeltas>& deltas, double gamma,
                      bool use_depth);

}  // namespace dpmot::kalman
