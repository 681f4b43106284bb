// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpmot/types.hpp"

// Synthetic ground-plane scenarios with exact projective rendering. Serves as
// the geometric oracle for the depth-ordering tests and as the generator for
// the adversarial tracking suites. Everything is deterministic under the
// scenario seed; frames can be rendered in any order.
namespace dpmot::synth {

struct Waypoint {
  int frame{1};
  double x{0.0};  // meters
  double z{0.0};
};

struct Agent {
  int id{1};
  double height{1.7};  // meters
  double width{0.5};
  unsigned appearance_seed{0};
  std::vector<Waypoint> waypoints;  // ascending frames, piecewise linear

  // nullopt outside the waypoint span
  std::optional<Vec2> position(int frame) const;  // (x, z)
};

enum class OcclusionMode { DropFar, MergeBoxes };

struct OcclusionEvent {
  int frame_begin{1};
  int frame_end{1};  // inclusive
  int agent_a{0};
  int agent_b{0};
  OcclusionMode mode{OcclusionMode::MergeBoxes};
};

struct Scenario {
  std::string name{"scenario"};
  CameraModel camera;
  std::vector<Agent> agents;
  int n_frames{1};
  double det_noise{0.0};  // pixel sigma on box edges
  std::vector<OcclusionEvent> occlusions;
  unsigned seed{0};
  int embedding_dim{0};             // 0 = no embeddings emitted
  double embedding_separation{1.0}; // ~0 makes all agents look alike
  double embedding_noise{0.01};
  bool moving_camera{false};
  std::vector<Waypoint> camera_path;  // ego position per frame when moving
  double frame_rate{30.0};
};

// Exact pinhole projection of a world point; throws BehindCamera when the
// point does not sit strictly in front of the image plane.
std::pair<double, double> project_point(const CameraModel& cam, double x,
                                        double y, double z);

struct FrameRender {
  std::vector<Detection> detections;  // file order = emission order
  std::vector<TrackRecord> gt;        // noiseless truth boxes, id = agent id
  std::vector<int> true_order;        // detection indices, nearest first
};

FrameRender render_frame(const Scenario& s, int frame);

struct RenderedSequence {
  SequenceInfo info;
  std::map<int, std::vector<Detection>> detections;
  std::vector<TrackRecord> gt;
  std::map<int, std::vector<int>> true_orders;
};

RenderedSequence render(const Scenario& s);

// Prebuilt scenario families used by the test suites.
namespace scenarios {

// Static camera, n agents standing on the ground at distinct depths.
Scenario random_static(unsigned seed, int n_agents, double pitch_deg,
                       double z_min, double z_max, double min_sep,
                       double det_noise);

// Constant-velocity ego camera with agents spread ahead of it.
Scenario ego_moving(unsigned seed, int n_agents);

// Two subjects at different depths walk toward each other, pause while their
// boxes coincide (one merged detection), then walk back the way they came.
// Built so image-plane cues are ambiguous but depth steps stay separated.
Scenario bounce_crossing(unsigned seed);

// Two subjects at the same depth straddling one merged detection; exercises
// the merged-column occlusion test directly.
Scenario merged_pair(unsigned seed);

// Parallel walkers, no interactions; every tracker config should be perfect.
Scenario easy_parallel(int n_agents, int n_frames, unsigned seed);

}  // namespace scenarios

}  // namespace dpmot::synth
