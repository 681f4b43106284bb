// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <vector>

#include "dpmot/assign.hpp"
#include "dpmot/types.hpp"

// Association costs. First order compares a track to a detection directly
// (appearance cosine, depth-gated IoU); second order compares how each one
// sits relative to everything else on its own side of the frame, which stays
// stable when two subjects overlap.
namespace dpmot::assoc {

struct CostComponents {
  MatX appearance;         // C_a, cosine similarity in [-1, 1]
  MatX diou;               // IoU masked by depth proximity, in [0, 1]
  MatX second_spatial;     // C_Pd, alignment distance of sorted-distance vectors
  MatX second_appearance;  // C_Pa, same over cosine-distance vectors
};

// Depth-proximity mask applied to IoU. With pixels=true the comparison runs
// on bottom-edge rows instead of quantized steps. An infinite tau disables
// the mask (plain IoU).
struct DepthGate {
  double tau{3.0};
  bool pixels{false};
};

// Cosine similarity of every track/detection embedding pair. Throws
// ZeroVector when any embedding norm falls under 1e-12.
MatX appearance_matrix(const std::vector<VecX>& track_emb,
                       const std::vector<VecX>& det_emb);

// track_z / det_z carry quantized depth steps (continuous for predicted
// tracks); in pixel mode the gate reads box bottoms instead.
MatX diou_matrix(const std::vector<BBox>& track_boxes,
                 const std::vector<double>& track_z,
                 const std::vector<BBox>& det_boxes,
                 const std::vector<double>& det_z, const DepthGate& gate);

// Ascending distances from pts[k] to every other point.
std::vector<double> sorted_distance_vector(int k, const std::vector<Vec3>& pts);

// Alignment score between two ascending vectors: anchor d_tilde[0] to its
// nearest element of d (ties and equal values resolve to the smallest index),
// then sum |d_tilde[i] - d[anchor + i]| over the indices that stay in range.
// Empty input on either side scores 0. Throws UnsortedInput.
double align_distance(const std::vector<double>& d_tilde,
                      const std::vector<double>& d);

// Fills C_Pd from positions and C_Pa from embeddings (zeros when embeddings
// are missing on either side). Positions are [c_x, c_y, scaled depth].
void second_order_matrices(const std::vector<Vec3>& track_pos,
                           const std::vector<Vec3>& det_pos,
                           const std::vector<VecX>& track_emb,
                           const std::vector<VecX>& det_emb, MatX& c_pd,
                           MatX& c_pa);

struct FuseParams {
  double alpha{0.6};
  double beta{0.4};
  double tau_gate{1.0};
  double spatial_scale{100.0};    // s_d, pixels
  double appearance_scale{0.5};   // s_a
  double sentinel{assign::kSentinel};
};

struct FusedCost {
  MatX cost;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> gated;
  double alpha{0.6};
  double beta{0.4};
  double tau_gate{1.0};
};

// Converts every component to a [0, 1] cost, blends with alpha / beta, and
// gates hopeless pairs to the sentinel: fused > tau_gate, or no box overlap
// combined with clearly dissimilar appearance.
FusedCost fuse(const CostComponents& c, const FuseParams& p);

}  // namespace dpmot::assoc
