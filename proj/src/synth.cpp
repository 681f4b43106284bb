// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dpmot/errors.hpp"

namespace dpmot::synth {

namespace {

constexpr double kFrontEps = 1e-9;

std::optional<Vec2> interp_waypoints(const std::vector<Waypoint>& wps, int frame) {
  if (wps.empty()) return std::nullopt;
  if (frame < wps.front().frame || frame > wps.back().frame) return std::nullopt;
  for (std::size_t i = 1; i < wps.size(); ++i) {
    if (frame > wps[i].frame) continue;
    const Waypoint& a = wps[i - 1];
    const Waypoint& b = wps[i];
    if (b.frame == a.frame) return Vec2{b.x, b.z};
    const double t = double(frame - a.frame) / double(b.frame - a.frame);
    return Vec2{a.x + t * (b.x - a.x), a.z + t * (b.z - a.z)};
  }
  return Vec2{wps.back().x, wps.back().z};
}

VecX unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  VecX v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = n(rng);
  } while (v.norm() < 1e-9);
  return v / v.norm();
}

std::mt19937_64 frame_rng(const Scenario& s, int frame) {
  return std::mt19937_64(static_cast<std::uint64_t>(s.seed) * 1000003ULL +
                         static_cast<std::uint64_t>(frame));
}

}  // namespace

std::optional<Vec2> Agent::position(int frame) const {
  return interp_waypoints(waypoints, frame);
}

std::pair<double, double> project_point(const CameraModel& cam, double x,
                                        double y, double z) {
  const Vec3 p = cam.rotation() * Vec3{x, y, z} + cam.translation();
  if (p.z() <= kFrontEps) throw BehindCamera("point not in front of the camera");
  return {cam.u_c + cam.f * p.x() / p.z(), cam.v_c + cam.f * p.y() / p.z()};
}

FrameRender render_frame(const Scenario& s, int frame) {
  FrameRender out;
  const CameraModel& cam = s.camera;

  Vec2 ego{0.0, 0.0};
  if (s.moving_camera) {
    if (auto p = interp_waypoints(s.camera_path, frame)) ego = *p;
  }

  struct Item {
    int agent_idx;
    BBox box;
    double depth;   // camera-frame depth of the ground contact
    bool merged{false};
    int other_idx{-1};
  };
  std::vector<Item> items;
  std::vector<int> visible;  // agent indices with a box this frame

  for (std::size_t ai = 0; ai < s.agents.size(); ++ai) {
    const Agent& a = s.agents[ai];
    const auto pos = a.position(frame);
    if (!pos) continue;
    const double x = pos->x() - ego.x();
    const double z = pos->y() - ego.y();
    BBox box;
    double depth;
    try {
      const auto foot = project_point(cam, x, 0.0, z);
      const auto head = project_point(cam, x, -a.height, z);
      const auto left = project_point(cam, x - 0.5 * a.width, 0.0, z);
      const auto right = project_point(cam, x + 0.5 * a.width, 0.0, z);
      const double u0 = std::min(left.first, right.first);
      const double u1 = std::max(left.first, right.first);
      box = BBox{u0, head.second, u1 - u0, foot.second - head.second};
      const Vec3 p = cam.rotation() * Vec3{x, 0.0, z} + cam.translation();
      depth = p.z();
    } catch (const BehindCamera&) {
      continue;
    }
    if (box.h <= 0.0 || box.w <= 0.0) continue;
    items.push_back({static_cast<int>(ai), box, depth, false, -1});
    visible.push_back(static_cast<int>(ai));

    TrackRecord rec;
    rec.id = a.id;
    rec.frame = frame;
    rec.bbox = box;
    rec.confidence = 1.0;
    out.gt.push_back(rec);
  }

  // detector-side occlusion events
  for (const auto& ev : s.occlusions) {
    if (frame < ev.frame_begin || frame > ev.frame_end) continue;
    int ia = -1, ib = -1;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (s.agents[items[k].agent_idx].id == ev.agent_a) ia = static_cast<int>(k);
      if (s.agents[items[k].agent_idx].id == ev.agent_b) ib = static_cast<int>(k);
    }
    if (ia < 0 || ib < 0) continue;
    if (ev.mode == OcclusionMode::DropFar) {
      const int drop = items[ia].depth >= items[ib].depth ? ia : ib;
      items.erase(items.begin() + drop);
    } else {
      Item& near_item = items[ia].depth <= items[ib].depth ? items[ia] : items[ib];
      Item& far_item = items[ia].depth <= items[ib].depth ? items[ib] : items[ia];
      const BBox& a = near_item.box;
      const BBox& b = far_item.box;
      const double x0 = std::min(a.x, b.x);
      const double y0 = std::min(a.y, b.y);
      const double x1 = std::max(a.right(), b.right());
      const double y1 = std::max(a.bottom(), b.bottom());
      near_item.box = BBox{x0, y0, x1 - x0, y1 - y0};
      near_item.merged = true;
      near_item.other_idx = far_item.agent_idx;
      const int drop = (&far_item == &items[ia]) ? ia : ib;
      items.erase(items.begin() + drop);
    }
  }

  auto rng = frame_rng(s, frame);

  // embeddings first, one per visible agent in agent order, so that drops and
  // merges downstream cannot shift the draw sequence
  std::map<int, VecX> agent_emb;
  if (s.embedding_dim > 0) {
    std::mt19937_64 base_rng(static_cast<std::uint64_t>(s.seed) ^
                             0x9E3779B97F4A7C15ULL);
    const VecX base = unit_vector(s.embedding_dim, base_rng);
    for (int ai : visible) {
      const Agent& a = s.agents[ai];
      std::mt19937_64 dir_rng(
          (static_cast<std::uint64_t>(a.appearance_seed) << 20) +
          static_cast<std::uint64_t>(a.id) * 7919ULL + 1ULL);
      const VecX dir = unit_vector(s.embedding_dim, dir_rng);
      VecX e = base + s.embedding_separation * dir;
      if (s.embedding_noise > 0.0)
        e += s.embedding_noise * unit_vector(s.embedding_dim, rng) *
             std::sqrt(double(s.embedding_dim));
      agent_emb[ai] = e / e.norm();
    }
  }

  // detections in item order, noise drawn per surviving box
  std::normal_distribution<double> pix(0.0, 1.0);
  for (const auto& it : items) {
    Detection d;
    d.frame = frame;
    d.bbox = it.box;
    d.confidence = 1.0;
    if (s.det_noise > 0.0) {
      const double n_left = pix(rng) * s.det_noise;
      const double n_top = pix(rng) * s.det_noise;
      const double n_right = pix(rng) * s.det_noise;
      const double n_bottom = pix(rng) * s.det_noise;
      const double x0 = d.bbox.x + n_left;
      const double y0 = d.bbox.y + n_top;
      const double x1 = d.bbox.right() + n_right;
      const double y1 = d.bbox.bottom() + n_bottom;
      d.bbox = BBox{x0, y0, std::max(1.0, x1 - x0), std::max(1.0, y1 - y0)};
    }
    if (s.embedding_dim > 0) {
      if (it.merged) {
        VecX e = agent_emb[it.agent_idx] + agent_emb[it.other_idx];
        d.embedding = e / e.norm();
      } else {
        d.embedding = agent_emb[it.agent_idx];
      }
    }
    out.detections.push_back(std::move(d));
  }

  out.true_order.resize(items.size());
  std::iota(out.true_order.begin(), out.true_order.end(), 0);
  std::stable_sort(out.true_order.begin(), out.true_order.end(),
                   [&](int a, int b) { return items[a].depth < items[b].depth; });
  return out;
}

RenderedSequence render(const Scenario& s) {
  RenderedSequence seq;
  seq.info.name = s.name;
  seq.info.img_w = s.camera.img_w;
  seq.info.img_h = s.camera.img_h;
  seq.info.frame_rate = s.frame_rate;
  seq.info.n_frames = s.n_frames;
  seq.info.embedding_dim = s.embedding_dim;
  for (int f = 1; f <= s.n_frames; ++f) {
    FrameRender fr = render_frame(s, f);
    seq.gt.insert(seq.gt.end(), fr.gt.begin(), fr.gt.end());
    seq.true_orders[f] = std::move(fr.true_order);
    seq.detections[f] = std::move(fr.detections);
  }
  return seq;
}

namespace scenarios {

Scenario random_static(unsigned seed, int n_agents, double pitch_deg,
                       double z_min, double z_max, double min_sep,
                       double det_noise) {
  Scenario s;
  s.name = "static_" + std::to_string(seed);
  s.seed = seed;
  s.n_frames = 1;
  s.det_noise = det_noise;
  s.camera = CameraModel{};
  s.camera.f = 1000.0;
  s.camera.u_c = 480.0;
  s.camera.v_c = 270.0;
  s.camera.height = 4.5;
  s.camera.pitch = pitch_deg * M_PI / 180.0;
  s.camera.img_w = 960;
  s.camera.img_h = 540;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uz(z_min, z_max - (n_agents - 1) * min_sep);
  std::uniform_real_distribution<double> ux(-6.0, 6.0);
  std::vector<double> zs(n_agents);
  for (auto& z : zs) z = uz(rng);
  std::sort(zs.begin(), zs.end());
  for (int i = 0; i < n_agents; ++i) {
    Agent a;
    a.id = i + 1;
    a.appearance_seed = seed * 131u + static_cast<unsigned>(i);
    const double z = zs[i] + i * min_sep;
    const double x = ux(rng);
    a.waypoints = {{1, x, z}};
    s.agents.push_back(std::move(a));
  }
  return s;
}

Scenario ego_moving(unsigned seed, int n_agents) {
  Scenario s;
  s.name = "ego_" + std::to_string(seed);
  s.seed = seed;
  s.n_frames = 60;
  s.moving_camera = true;
  s.camera = CameraModel{};
  s.camera.f = 1000.0;
  s.camera.u_c = 480.0;
  s.camera.v_c = 270.0;
  s.camera.height = 1.5;
  s.camera.img_w = 960;
  s.camera.img_h = 540;
  s.camera_path = {{1, 0.0, 0.0}, {60, 0.0, 15.0}};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uz(25.0, 60.0);
  std::uniform_real_distribution<double> ux(-5.0, 5.0);
  std::uniform_real_distribution<double> uv(-0.05, 0.05);
  for (int i = 0; i < n_agents; ++i) {
    Agent a;
    a.id = i + 1;
    a.appearance_seed = seed * 131u + static_cast<unsigned>(i);
    const double z = uz(rng);
    const double x = ux(rng);
    const double vx = uv(rng);
    a.waypoints = {{1, x, z}, {60, x + 59 * vx, z}};
    s.agents.push_back(std::move(a));
  }
  // keep depths distinct in the ego frame across the whole run
  std::sort(s.agents.begin(), s.agents.end(), [](const Agent& a, const Agent& b) {
    return a.waypoints[0].z < b.waypoints[0].z;
  });
  for (int i = 1; i < n_agents; ++i) {
    double prev = s.agents[i - 1].waypoints[0].z;
    if (s.agents[i].waypoints[0].z < prev + 1.0) {
      const double shift = prev + 1.0 - s.agents[i].waypoints[0].z;
      for (auto& w : s.agents[i].waypoints) w.z += shift;
    }
  }
  for (int i = 0; i < n_agents; ++i) s.agents[i].id = i + 1;
  return s;
}

Scenario bounce_crossing(unsigned seed) {
  Scenario s;
  s.name = "bounce_" + std::to_string(seed);
  s.seed = seed;
  s.n_frames = 60;
  s.embedding_dim = 32;
  s.embedding_separation = 0.0;  // every subject looks the same
  s.embedding_noise = 0.005;
  s.camera = CameraModel{};
  s.camera.f = 1000.0;
  s.camera.u_c = 480.0;
  s.camera.v_c = 270.0;
  s.camera.height = 3.0;
  s.camera.img_w = 960;
  s.camera.img_h = 540;

  // walk in, pause overlapped at mid-frame, walk back out
  Agent a;  // near subject, left to center and back
  a.id = 1;
  a.appearance_seed = seed * 131u + 1;
  a.waypoints = {{1, -2.30, 8.0}, {27, -0.20, 8.0}, {29, -0.03, 8.0},
                 {31, -0.03, 8.0}, {33, -0.20, 8.0}, {60, -2.30, 8.0}};
  Agent b;  // slightly farther, right to center and back
  b.id = 2;
  b.appearance_seed = seed * 131u + 2;
  b.waypoints = {{1, 2.60, 9.0}, {27, 0.22, 9.0}, {29, 0.03, 9.0},
                 {31, 0.03, 9.0}, {33, 0.22, 9.0}, {60, 2.60, 9.0}};
  s.agents = {a, b};
  s.occlusions = {{30, 30, 1, 2, OcclusionMode::MergeBoxes}};
  return s;
}

Scenario merged_pair(unsigned seed) {
  Scenario s;
  s.name = "merged_" + std::to_string(seed);
  s.seed = seed;
  s.n_frames = 30;
  s.embedding_dim = 32;
  s.embedding_separation = 0.0;
  s.embedding_noise = 0.0;
  s.camera = CameraModel{};
  s.camera.f = 1000.0;
  s.camera.u_c = 480.0;
  s.camera.v_c = 270.0;
  s.camera.height = 3.0;
  s.camera.img_w = 960;
  s.camera.img_h = 540;

  Agent a;
  a.id = 1;
  a.appearance_seed = seed * 131u + 1;
  a.waypoints = {{1, -0.45, 10.0}, {30, 1.05, 10.0}};
  Agent b;
  b.id = 2;
  b.appearance_seed = seed * 131u + 2;
  b.waypoints = {{1, 0.45, 10.0}, {30, 1.95, 10.0}};
  s.agents = {a, b};
  s.occlusions = {{15, 17, 1, 2, OcclusionMode::MergeBoxes}};
  return s;
}

Scenario easy_parallel(int n_agents, int n_frames, unsigned seed) {
  Scenario s;
  s.name = "parallel_" + std::to_string(n_agents);
  s.seed = seed;
  s.n_frames = n_frames;
  s.embedding_dim = 32;
  s.embedding_separation = 1.0;
  s.embedding_noise = 0.01;
  s.camera = CameraModel{};
  s.camera.f = 1000.0;
  s.camera.u_c = 480.0;
  s.camera.v_c = 270.0;
  s.camera.height = 3.0;
  s.camera.img_w = 960;
  s.camera.img_h = 540;

  for (int i = 0; i < n_agents; ++i) {
    Agent a;
    a.id = i + 1;
    a.appearance_seed = seed * 131u + static_cast<unsigned>(i);
    const double z = 6.0 + 3.0 * i;
    const double x0 = -1.5 + 0.35 * i;
    a.waypoints = {{1, x0, z}, {n_frames, x0 + 0.02 * (n_frames - 1), z}};
    s.agents.push_back(std::move(a));
  }
  return s;
}

}  // namespace scenarios

}  // namespace dpmot::synth
