// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/assoc.hpp"

#include <algorithm>
#include <cmath>

#include "dpmot/errors.hpp"

namespace dpmot::assoc {

namespace {
constexpr double kNormEps = 1e-12;

double cosine(const VecX& a, const VecX& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na < kNormEps || nb < kNormEps)
    throw ZeroVector("zero-norm embedding in cosine similarity");
  return a.dot(b) / (na * nb);
}

void check_sorted(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) throw UnsortedInput("distance vector is not ascending");
}
}  // namespace

MatX appearance_matrix(const std::vector<VecX>& track_emb,
                       const std::vector<VecX>& det_emb) {
  MatX c(track_emb.size(), det_emb.size());
  for (std::size_t i = 0; i < track_emb.size(); ++i)
    for (std::size_t j = 0; j < det_emb.size(); ++j)
      c(i, j) = cosine(track_emb[i], det_emb[j]);
  return c;
}

MatX diou_matrix(const std::vector<BBox>& track_boxes,
                 const std::vector<double>& track_z,
                 const std::vector<BBox>& det_boxes,
                 const std::vector<double>& det_z, const DepthGate& gate) {
  MatX c(track_boxes.size(), det_boxes.size());
  for (std::size_t i = 0; i < track_boxes.size(); ++i) {
    for (std::size_t j = 0; j < det_boxes.size(); ++j) {
      const double depth_gap =
          gate.pixels ? std::abs(track_boxes[i].bottom() - det_boxes[j].bottom())
                      : std::abs(track_z[i] - det_z[j]);
      const bool near = depth_gap < gate.tau;
      c(i, j) = near ? iou(track_boxes[i], det_boxes[j]) : 0.0;
    }
  }
  return c;
}

std::vector<double> sorted_distance_vector(int k, const std::vector<Vec3>& pts) {
  std::vector<double> d;
  d.reserve(pts.size() > 0 ? pts.size() - 1 : 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<int>(i) == k) continue;
    d.push_back((pts[k] - pts[i]).norm());
  }
  std::sort(d.begin(), d.end());
  return d;
}

double align_distance(const std::vector<double>& d_tilde,
                      const std::vector<double>& d) {
  if (d_tilde.empty() || d.empty()) return 0.0;
  check_sorted(d_tilde);
  check_sorted(d);

  // nearest element to the first query value; lower_bound gives the split
  // point, the winner is one of its two neighbors
  const double head = d_tilde.front();
  auto lb = std::lower_bound(d.begin(), d.end(), head);
  std::size_t anchor;
  if (lb == d.end()) {
    anchor = d.size() - 1;
  } else if (lb == d.begin()) {
    anchor = 0;
  } else {
    const std::size_t hi = static_cast<std::size_t>(lb - d.begin());
    const std::size_t lo = hi - 1;
    anchor = (std::abs(head - d[lo]) <= std::abs(d[hi] - head)) ? lo : hi;
  }
  // equal values share the same distance; take the first of the run
  while (anchor > 0 && d[anchor - 1] == d[anchor]) --anchor;

  double sum = 0.0;
  for (std::size_t i = 0; i < d_tilde.size(); ++i) {
    const std::size_t j = anchor + i;
    if (j >= d.size()) break;  // extra elements on the long side are ignored
    sum += std::abs(d_tilde[i] - d[j]);
  }
  return sum;
}

void second_order_matrices(const std::vector<Vec3>& track_pos,
                           const std::vector<Vec3>& det_pos,
                           const std::vector<VecX>& track_emb,
                           const std::vector<VecX>& det_emb, MatX& c_pd,
                           MatX& c_pa) {
  const int nt = static_cast<int>(track_pos.size());
  const int nd = static_cast<int>(det_pos.size());

  std::vector<std::vector<double>> track_dist(nt), det_dist(nd);
  for (int i = 0; i < nt; ++i) track_dist[i] = sorted_distance_vector(i, track_pos);
  for (int j = 0; j < nd; ++j) det_dist[j] = sorted_distance_vector(j, det_pos);

  c_pd.resize(nt, nd);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nd; ++j)
      c_pd(i, j) = align_distance(track_dist[i], det_dist[j]);

  c_pa = MatX::Zero(nt, nd);
  const bool have_emb =
      static_cast<int>(track_emb.size()) == nt &&
      static_cast<int>(det_emb.size()) == nd &&
      std::all_of(track_emb.begin(), track_emb.end(),
                  [](const VecX& e) { return e.size() > 0; }) &&
      std::all_of(det_emb.begin(), det_emb.end(),
                  [](const VecX& e) { return e.size() > 0; });
  if (!have_emb || nt == 0 || nd == 0) return;

  auto cosine_profile = [](const std::vector<VecX>& embs, int k) {
    std::vector<double> d;
    d.reserve(embs.size() - 1);
    for (std::size_t i = 0; i < embs.size(); ++i) {
      if (static_cast<int>(i) == k) continue;
      const double na = embs[k].norm();
      const double nb = embs[i].norm();
      if (na < kNormEps || nb < kNormEps)
        throw ZeroVector("zero-norm embedding in cosine profile");
      d.push_back(1.0 - embs[k].dot(embs[i]) / (na * nb));
    }
    std::sort(d.begin(), d.end());
    return d;
  };

  std::vector<std::vector<double>> track_cos(nt), det_cos(nd);
  for (int i = 0; i < nt; ++i) track_cos[i] = cosine_profile(track_emb, i);
  for (int j = 0; j < nd; ++j) det_cos[j] = cosine_profile(det_emb, j);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nd; ++j)
      c_pa(i, j) = align_distance(track_cos[i], det_cos[j]);
}

FusedCost fuse(const CostComponents& c, const FuseParams& p) {
  const int nt = static_cast<int>(c.diou.rows());
  const int nd = static_cast<int>(c.diou.cols());
  FusedCost out;
  out.alpha = p.alpha;
  out.beta = p.beta;
  out.tau_gate = p.tau_gate;
  out.cost.resize(nt, nd);
  out.gated.resize(nt, nd);

  const bool have_appearance = c.appearance.size() > 0;
  const bool have_second = c.second_spatial.size() > 0;
  const bool have_second_app = c.second_appearance.size() > 0;

  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nd; ++j) {
      // appearance and overlap similarities to [0, 1] costs; without
      // embeddings the appearance term drops out, like the beta terms do
      const double cost_a =
          have_appearance ? 0.5 * (1.0 - c.appearance(i, j)) : 0.0;
      const double cost_diou = 1.0 - c.diou(i, j);
      const double cost_pd =
          have_second ? 1.0 - std::exp(-c.second_spatial(i, j) / p.spatial_scale)
                      : 0.0;
      const double cost_pa =
          have_second_app
              ? 1.0 - std::exp(-c.second_appearance(i, j) / p.appearance_scale)
              : 0.0;
      const double fused =
          p.alpha * (cost_a + cost_diou) + p.beta * (cost_pa + cost_pd);
      const bool hard_gate = cost_diou >= 1.0 && cost_a > 0.8;
      const bool gated = fused > p.tau_gate || hard_gate;
      out.gated(i, j) = gated;
      out.cost(i, j) = gated ? p.sentinel : fused;
    }
  }
  return out;
}

}  // namespace dpmot::assoc
