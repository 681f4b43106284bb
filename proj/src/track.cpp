// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/track.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "dpmot/assign.hpp"
#include "dpmot/errors.hpp"
#include "dpmot/sode.hpp"

namespace dpmot {

namespace {
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}
}  // namespace

MotionModel motion_model_from_string(const std::string& s) {
  if (s == "2dkf") return MotionModel::Kf2d;
  if (s == "3dkf") return MotionModel::Kf3d;
  if (s == "a-2dkf") return MotionModel::ActiveKf2d;
  if (s == "a-3dkf") return MotionModel::ActiveKf3d;
  throw ConfigError("unknown motion model: " + s);
}

AssociationMode association_from_string(const std::string& s) {
  if (s == "first-order") return AssociationMode::FirstOrder;
  if (s == "high-order") return AssociationMode::HighOrder;
  throw ConfigError("unknown association mode: " + s);
}

std::string to_string(MotionModel m) {
  switch (m) {
    case MotionModel::Kf2d: return "2dkf";
    case MotionModel::Kf3d: return "3dkf";
    case MotionModel::ActiveKf2d: return "a-2dkf";
    case MotionModel::ActiveKf3d: return "a-3dkf";
  }
  return "a-3dkf";
}

std::string to_string(AssociationMode a) {
  return a == AssociationMode::FirstOrder ? "first-order" : "high-order";
}

void TrackerConfig::normalize() {
  alpha = std::max(0.0, alpha);
  beta = std::max(0.0, beta);
  const double sum = alpha + beta;
  if (sum <= 0.0) throw ConfigError("alpha + beta must be positive");
  alpha /= sum;
  beta /= sum;
}

std::optional<kalman::MotionDeltas> CenterHistoryMotion::deltas(
    const Track& t) const {
  if (t.center_history.size() < 3) return std::nullopt;
  const auto& c0 = t.center_history[0];
  const auto& c1 = t.center_history[1];
  const auto& c2 = t.center_history[2];
  // per-frame differences are only meaningful over consecutive matches
  if (c1.frame != c0.frame + 1 || c2.frame != c1.frame + 1) return std::nullopt;
  return kalman::MotionDeltas{c1.center - c0.center, c2.center - c1.center};
}

std::optional<kalman::MotionDeltas> FlowFileMotion::deltas(const Track& t) const {
  const auto it = table_.find({t.last_frame, t.last_det_index});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

MergeCheck detect_merged_detection(const VecX& column, double tau_c,
                                   double sentinel) {
  MergeCheck out;
  int best = -1, second = -1;
  for (int i = 0; i < column.size(); ++i) {
    if (column(i) >= sentinel) continue;
    if (best < 0 || column(i) < column(best)) {
      second = best;
      best = i;
    } else if (second < 0 || column(i) < column(second)) {
      second = i;
    }
  }
  if (best < 0 || second < 0) return out;
  if (column(second) - column(best) < tau_c) {
    out.merged = true;
    out.first_track = best;
    out.second_track = second;
  }
  return out;
}

Tracker::Tracker(TrackerConfig cfg, CameraModel cam)
    : cfg_(std::move(cfg)), cam_(std::move(cam)) {
  cfg_.normalize();
  if (cam_.img_h <= 0) throw ConfigError("camera needs a positive image height");
  w_z_ = cfg_.w_z > 0.0 ? cfg_.w_z : cam_.img_h / (cfg_.lambda_q * 10.0);

  kalman::KfParams kp;
  kp.sigma = cfg_.sigma;
  kp.use_depth = cfg_.use_depth();
  model_ = kalman::KfModel(kp);

  if (cfg_.motion_provider == "history" || cfg_.motion_provider.empty()) {
    motion_ = std::make_shared<CenterHistoryMotion>();
  }
  // "flow-file" expects set_motion_provider with a loaded table; until then
  // control falls back to zero
}

void Tracker::predict_track(Track& t, int steps) {
  Vec3 u = Vec3::Zero();
  if (cfg_.use_control() && motion_) {
    const double v_l = kalman::state_box(t.kf).bottom();
    const double gamma =
        kalman::depth_gamma(v_l, cam_.img_h, cfg_.lambda_q, w_z_);
    u = kalman::estimate_control(motion_->deltas(t), gamma, cfg_.use_depth());
  }
  for (int k = 0; k < steps; ++k) kalman::predict(t.kf, model_, u);
}

void Tracker::spawn_track(const Detection& d, int det_index) {
  Track t;
  t.id = next_id_++;
  kalman::KfParams kp = model_.params();
  t.kf = kalman::init_state(d.bbox, d.depth_order * w_z_, kp);
  t.status = TrackStatus::Tentative;
  t.hits = 1;
  t.age = 0;
  if (d.embedding.size() > 0) {
    t.embedding_memory = d.embedding / d.embedding.norm();
  }
  t.center_history.push_back({d.frame, Vec2{d.bbox.cx(), d.bbox.cy()}});
  t.last_zhat = d.depth_order;
  t.last_confidence = d.confidence;
  t.last_frame = d.frame;
  t.last_det_index = det_index;
  if (t.hits >= cfg_.min_hits) t.status = TrackStatus::Active;
  tracks_.push_back(std::move(t));
}

void Tracker::apply_match(Track& t, const Detection& d, int det_index,
                          std::vector<TrackRecord>& out) {
  const VecX z = model_.measurement(d.bbox, d.depth_order * w_z_);
  kalman::update(t.kf, model_, z);
  t.hits++;
  t.misses = 0;
  if (d.embedding.size() > 0) {
    const VecX e = d.embedding / d.embedding.norm();
    if (t.embedding_memory.size() == e.size()) {
      t.embedding_memory = cfg_.appearance_momentum * t.embedding_memory +
                           (1.0 - cfg_.appearance_momentum) * e;
      const double n = t.embedding_memory.norm();
      if (n > 1e-12) t.embedding_memory /= n;
    } else {
      t.embedding_memory = e;
    }
  }
  t.center_history.push_back({d.frame, Vec2{d.bbox.cx(), d.bbox.cy()}});
  while (t.center_history.size() > 3) t.center_history.pop_front();
  t.last_zhat = d.depth_order;
  t.last_confidence = d.confidence;
  t.last_frame = d.frame;
  t.last_det_index = det_index;

  TrackRecord rec{t.id, d.frame, kalman::state_box(t.kf), d.confidence};
  if (t.status == TrackStatus::Tentative) {
    if (t.hits >= cfg_.min_hits) {
      t.status = TrackStatus::Active;
      for (auto& p : t.pending) out.push_back(p);  // backfill buffered frames
      t.pending.clear();
      out.push_back(rec);
    } else {
      t.pending.push_back(rec);
    }
  } else {
    t.status = TrackStatus::Active;  // Lost tracks reactivate on a match
    out.push_back(rec);
  }
}

std::vector<TrackRecord> Tracker::step(int frame, std::vector<Detection> dets) {
  if (last_frame_ >= 0 && frame <= last_frame_)
    throw InvalidFrameOrder("frame " + std::to_string(frame) +
                            " does not advance past " +
                            std::to_string(last_frame_));
  const int elapsed = last_frame_ < 0 ? 1 : frame - last_frame_;
  last_frame_ = frame;

  std::vector<TrackRecord> out;

  // ingest gate
  std::vector<int> det_rows;  // original row of each kept detection
  {
    std::vector<Detection> kept;
    kept.reserve(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (dets[i].confidence < cfg_.conf_threshold) continue;
      det_rows.push_back(static_cast<int>(i));
      kept.push_back(std::move(dets[i]));
    }
    dets = std::move(kept);
  }
  for (auto& d : dets) d.frame = frame;

  const auto t_sode = Clock::now();
  sode::order_detections(dets, cam_,
                         {cfg_.lambda_q, cfg_.moving_camera});
  timings_.sode_ms += ms_since(t_sode);

  const auto t_pred = Clock::now();
  std::vector<int> live;
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& t = tracks_[i];
    if (t.status == TrackStatus::Removed) continue;
    t.age += elapsed;
    predict_track(t, elapsed);
    live.push_back(static_cast<int>(i));
  }
  timings_.predict_ms += ms_since(t_pred);

  const int nt = static_cast<int>(live.size());
  const int nd = static_cast<int>(dets.size());

  const auto t_assoc = Clock::now();
  assoc::CostComponents comps;
  assoc::FusedCost fused;
  if (nt > 0 && nd > 0) {
    std::vector<BBox> tboxes(nt);
    std::vector<double> tz(nt), dz(nd);
    std::vector<BBox> dboxes(nd);
    for (int i = 0; i < nt; ++i) {
      const Track& t = tracks_[live[i]];
      tboxes[i] = kalman::state_box(t.kf);
      tz[i] = cfg_.use_depth() ? t.kf.x(2) / w_z_ : t.last_zhat;
    }
    for (int j = 0; j < nd; ++j) {
      dboxes[j] = dets[j].bbox;
      dz[j] = dets[j].depth_order;
    }

    bool have_emb = true;
    for (int i = 0; i < nt && have_emb; ++i)
      if (tracks_[live[i]].embedding_memory.size() == 0) have_emb = false;
    for (int j = 0; j < nd && have_emb; ++j)
      if (dets[j].embedding.size() == 0) have_emb = false;

    if (have_emb) {
      std::vector<VecX> temb(nt), demb(nd);
      for (int i = 0; i < nt; ++i) temb[i] = tracks_[live[i]].embedding_memory;
      for (int j = 0; j < nd; ++j) demb[j] = dets[j].embedding;
      comps.appearance = assoc::appearance_matrix(temb, demb);
      if (cfg_.association == AssociationMode::HighOrder) {
        std::vector<Vec3> tpos(nt), dpos(nd);
        for (int i = 0; i < nt; ++i) {
          const Track& t = tracks_[live[i]];
          tpos[i] = {t.kf.x(0), t.kf.x(1), cfg_.use_depth() ? t.kf.x(2) : 0.0};
        }
        for (int j = 0; j < nd; ++j)
          dpos[j] = {dets[j].bbox.cx(), dets[j].bbox.cy(),
                     cfg_.use_depth() ? dets[j].depth_order * w_z_ : 0.0};
        assoc::second_order_matrices(tpos, dpos, temb, demb,
                                     comps.second_spatial,
                                     comps.second_appearance);
      }
    } else if (cfg_.association == AssociationMode::HighOrder) {
      std::vector<Vec3> tpos(nt), dpos(nd);
      for (int i = 0; i < nt; ++i) {
        const Track& t = tracks_[live[i]];
        tpos[i] = {t.kf.x(0), t.kf.x(1), cfg_.use_depth() ? t.kf.x(2) : 0.0};
      }
      for (int j = 0; j < nd; ++j)
        dpos[j] = {dets[j].bbox.cx(), dets[j].bbox.cy(),
                   cfg_.use_depth() ? dets[j].depth_order * w_z_ : 0.0};
      assoc::second_order_matrices(tpos, dpos, {}, {}, comps.second_spatial,
                                   comps.second_appearance);
    }

    assoc::DepthGate gate;
    gate.pixels = cfg_.tau_z_pixels;
    gate.tau = cfg_.use_depth() ? cfg_.tau_z
                                : std::numeric_limits<double>::infinity();
    comps.diou = assoc::diou_matrix(tboxes, tz, dboxes, dz, gate);

    assoc::FuseParams fp;
    if (cfg_.association == AssociationMode::FirstOrder) {
      fp.alpha = 1.0;
      fp.beta = 0.0;
    } else {
      fp.alpha = cfg_.alpha;
      fp.beta = cfg_.beta;
    }
    fp.tau_gate = cfg_.tau_gate;
    fp.spatial_scale = cfg_.s_d;
    fp.appearance_scale = cfg_.s_a;
    fused = assoc::fuse(comps, fp);
    if (debug_) debug_({frame, &comps, &fused});
  }
  timings_.associate_ms += ms_since(t_assoc);

  // one detection sitting on two tracks: park the pair, skip the box
  std::vector<char> det_merged(nd, 0);
  std::vector<char> implicated(nt, 0);
  for (int j = 0; j < nd; ++j) {
    if (nt == 0) break;
    const MergeCheck mc =
        detect_merged_detection(fused.cost.col(j), cfg_.tau_c);
    if (!mc.merged) continue;
    det_merged[j] = 1;
    implicated[mc.first_track] = 1;
    implicated[mc.second_track] = 1;
  }

  const auto t_assign = Clock::now();
  std::vector<int> col_map;
  for (int j = 0; j < nd; ++j)
    if (!det_merged[j]) col_map.push_back(j);
  assign::Assignment sol;
  if (nt > 0 && !col_map.empty()) {
    MatX sub(nt, col_map.size());
    for (std::size_t c = 0; c < col_map.size(); ++c)
      sub.col(c) = fused.cost.col(col_map[c]);
    sol = assign::solve(sub);
  } else {
    for (int i = 0; i < nt; ++i) sol.unmatched_tracks.push_back(i);
    for (std::size_t c = 0; c < col_map.size(); ++c)
      sol.unmatched_dets.push_back(static_cast<int>(c));
  }
  timings_.assign_ms += ms_since(t_assign);

  const auto t_upd = Clock::now();
  std::vector<char> det_used(nd, 0);
  for (const auto& m : sol.matches) {
    const int det_idx = col_map[m.det];
    Track& t = tracks_[live[m.track]];
    apply_match(t, dets[det_idx], det_rows[det_idx], out);
    det_used[det_idx] = 1;
    implicated[m.track] = 0;  // a real match overrides the parked state
  }

  for (int i : sol.unmatched_tracks) {
    Track& t = tracks_[live[i]];
    if (implicated[i]) {
      // coasting through a merged detection: predict-only, no miss, and the
      // pair stays on the books
      if (t.status == TrackStatus::Active) {
        out.push_back(
            {t.id, frame, kalman::state_box(t.kf), t.last_confidence});
      }
      continue;
    }
    if (t.status == TrackStatus::Tentative) {
      t.status = TrackStatus::Removed;
      t.pending.clear();
    } else {
      t.misses++;
      t.hits = 0;
      if (t.status == TrackStatus::Active) t.status = TrackStatus::Lost;
      if (t.misses >= cfg_.max_age) t.status = TrackStatus::Removed;
    }
  }

  for (int j = 0; j < nd; ++j) {
    if (det_used[j] || det_merged[j]) continue;
    spawn_track(dets[j], det_rows[j]);
    Track& t = tracks_.back();
    TrackRecord rec{t.id, frame, kalman::state_box(t.kf), t.last_confidence};
    if (t.status == TrackStatus::Active) {
      out.push_back(rec);  // min_hits <= 1
    } else {
      t.pending.push_back(rec);
    }
  }
  timings_.update_ms += ms_since(t_upd);
  timings_.frames++;

  return out;
}

SequenceResult run_sequence(const std::map<int, std::vector<Detection>>& stream,
                            const TrackerConfig& cfg, const CameraModel& cam,
                            std::shared_ptr<MotionProvider> provider,
                            std::function<void(const StepDebug&)> debug) {
  Tracker tracker(cfg, cam);
  if (provider) tracker.set_motion_provider(std::move(provider));
  if (debug) tracker.set_debug_hook(std::move(debug));

  SequenceResult res;
  const auto t0 = Clock::now();
  for (const auto& [frame, dets] : stream) {
    auto recs = tracker.step(frame, dets);
    res.records.insert(res.records.end(), recs.begin(), recs.end());
  }
  res.timings = tracker.timings();
  res.timings.total_ms = ms_since(t0);
  std::sort(res.records.begin(), res.records.end(),
            [](const TrackRecord& a, const TrackRecord& b) {
              if (a.frame != b.frame) return a.frame < b.frame;
              return a.id < b.id;
            });
  return res;
}

}  // namespace dpmot
