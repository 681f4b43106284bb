// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/kalman.hpp"

#include <algorithm>
#include <cmath>

#include "dpmot/errors.hpp"

namespace dpmot::kalman {

namespace {
constexpr double kMinScale = 1e-4;
constexpr double kMaxCondition = 1e12;
}  // namespace

KfModel::KfModel(const KfParams& params) : params_(params) {
  const double dt = params.dt;

  f_ = Mat9::Identity();
  f_(0, 5) = dt;  // c_x <- c_x'
  f_(1, 6) = dt;  // c_y <- c_y'
  f_(2, 7) = dt;  // z   <- z'
  f_(3, 8) = dt;  // s   <- s'
  // row 4 (ratio) has no velocity

  g_ = Mat93::Zero();
  g_(0, 0) = 0.5 * dt * dt;
  g_(1, 1) = 0.5 * dt * dt;
  g_(2, 2) = 0.5 * dt * dt;
  g_(5, 0) = dt;
  g_(6, 1) = dt;
  g_(7, 2) = dt;

  q_ = g_ * (params.sigma * params.sigma) * g_.transpose() +
       params.q_reg * Mat9::Identity();

  const int m = params.use_depth ? 5 : 4;
  h_ = MatX::Zero(m, 9);
  r_ = MatX::Zero(m, m);
  int row = 0;
  for (int i = 0; i < 5; ++i) {
    if (!params.use_depth && i == 2) continue;
    h_(row, i) = 1.0;
    r_(row, row) = params.r_diag(i);
    ++row;
  }
}

VecX KfModel::measurement(const BBox& box, double scaled_depth) const {
  VecX z(meas_dim());
  int row = 0;
  z(row++) = box.cx();
  z(row++) = box.cy();
  if (params_.use_depth) z(row++) = scaled_depth;
  z(row++) = box.scale();
  z(row) = box.ratio();
  return z;
}

KfState init_state(const BBox& box, double scaled_depth, const KfParams& params) {
  KfState s;
  s.x << box.cx(), box.cy(), scaled_depth, box.scale(), box.ratio(), 0, 0, 0, 0;
  s.P = params.p0.asDiagonal();
  return s;
}

void predict(KfState& s, const KfModel& m, const Vec3& u) {
  // a shrinking box must not predict through zero area
  if (s.x(3) + s.x(8) <= 0.0) s.x(8) = 0.0;
  s.x = m.F() * s.x + m.G() * u;
  s.P = m.F() * s.P * m.F().transpose() + m.Q();
  s.P = 0.5 * (s.P + s.P.transpose()).eval();
  if (!s.x.allFinite() || !s.P.allFinite())
    throw NonFiniteState("non-finite state after predict");
}

MatX kalman_gain(const KfState& s, const KfModel& m) {
  const MatX S = m.H() * s.P * m.H().transpose() + m.R();
  Eigen::JacobiSVD<MatX> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > 0.0) || smax / smin > kMaxCondition)
    throw SingularInnovation("innovation covariance is numerically singular");
  return s.P * m.H().transpose() * S.inverse();
}

void update(KfState& s, const KfModel& m, const VecX& z) {
  const MatX K = kalman_gain(s, m);
  s.x += K * (z - m.H() * s.x);
  s.P = (Mat9::Identity() - K * m.H()) * s.P;
  s.P = 0.5 * (s.P + s.P.transpose()).eval();
  if (!s.x.allFinite() || !s.P.allFinite())
    throw NonFiniteState("non-finite state after update");
}

BBox state_box(const KfState& s) {
  const double sc = std::max(s.x(3), kMinScale);
  const double r = std::max(s.x(4), kMinScale);
  return BBox::from_center_form(s.x(0), s.x(1), sc, r);
}

double depth_gamma(double v_l, int img_h, double lambda_q, double w_z) {
  const double v = std::clamp(v_l, 1.0, 1.5 * img_h);
  return lambda_q * img_h / (v * v) * w_z;
}

Vec3 estimate_control(const std::optional<MotionDeltas>& deltas, double gamma,
                      bool use_depth) {
  if (!deltas) return Vec3::Zero();
  const double ax = deltas->next.x() - deltas->prev.x();
  const double ay = deltas->next.y() - deltas->prev.y();
  return {ax, ay, use_depth ? gamma * ay : 0.0};
}

}  // namespace dpmot::kalman
