// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpmot/assoc.hpp"
#include "dpmot/kalman.hpp"
#include "dpmot/types.hpp"

namespace dpmot {

enum class TrackStatus { Tentative, Active, Lost, Removed };

enum class MotionModel { Kf2d, Kf3d, ActiveKf2d, ActiveKf3d };
enum class AssociationMode { FirstOrder, HighOrder };

MotionModel motion_model_from_string(const std::string& s);       // ConfigError
AssociationMode association_from_string(const std::string& s);
std::string to_string(MotionModel m);
std::string to_string(AssociationMode a);

struct TrackerConfig {
  double alpha{0.6};
  double beta{0.4};
  double tau_z{3.0};          // depth steps; pixels when tau_z_pixels
  bool tau_z_pixels{false};
  double tau_gate{1.0};
  double tau_c{0.1};          // merged-detection column threshold
  int min_hits{3};
  int max_age{30};
  double sigma{1.0};
  double w_z{0.0};            // depth unit weight; 0 = img_h / (lambda_q * 10)
  double lambda_q{10.0};      // depth bins scale
  double conf_threshold{0.1};
  double appearance_momentum{0.9};
  double s_d{100.0};
  double s_a{0.5};
  MotionModel motion{MotionModel::ActiveKf3d};
  AssociationMode association{AssociationMode::HighOrder};
  bool moving_camera{false};
  std::string motion_provider{"history"};  // "history" or "flow-file"

  bool use_depth() const {
    return motion == MotionModel::Kf3d || motion == MotionModel::ActiveKf3d;
  }
  bool use_control() const {
    return motion == MotionModel::ActiveKf2d || motion == MotionModel::ActiveKf3d;
  }
  // clamps weights and renormalizes alpha + beta to 1
  void normalize();
};

struct CenterSample {
  int frame;
  Vec2 center;
};

struct Track {
  int id{0};
  kalman::KfState kf;
  TrackStatus status{TrackStatus::Tentative};
  int hits{0};    // consecutive matches
  int misses{0};  // consecutive misses
  int age{0};
  VecX embedding_memory;                 // EMA of matched embeddings
  std::deque<CenterSample> center_history;  // last 3 matched centers
  double last_zhat{0.0};                 // depth steps from the last match
  double last_confidence{1.0};
  int last_frame{0};                     // frame of the last match
  int last_det_index{-1};                // detection row of the last match
  std::vector<TrackRecord> pending;      // buffered while tentative
};

class MotionProvider {
 public:
  virtual ~MotionProvider() = default;
  virtual std::optional<kalman::MotionDeltas> deltas(const Track& t) const = 0;
};

// Finite differences over the last three matched centers; requires them to
// come from consecutive frames.
class CenterHistoryMotion : public MotionProvider {
 public:
  std::optional<kalman::MotionDeltas> deltas(const Track& t) const override;
};

// Precomputed per-detection displacement table keyed by (frame, det index).
class FlowFileMotion : public MotionProvider {
 public:
  explicit FlowFileMotion(
      std::map<std::pair<int, int>, kalman::MotionDeltas> table)
      : table_(std::move(table)) {}
  std::optional<kalman::MotionDeltas> deltas(const Track& t) const override;

 private:
  std::map<std::pair<int, int>, kalman::MotionDeltas> table_;
};

// Column test for one detection covering two subjects: true when the two
// smallest finite costs of the column are within tau_c of each other.
struct MergeCheck {
  bool merged{false};
  int first_track{-1};
  int second_track{-1};
};
MergeCheck detect_merged_detection(const VecX& column, double tau_c,
                                   double sentinel = assign::kSentinel);

struct StepDebug {
  int frame;
  const assoc::CostComponents* components;
  const assoc::FusedCost* fused;
};

struct StageTimings {
  double sode_ms{0.0};
  double predict_ms{0.0};
  double associate_ms{0.0};
  double assign_ms{0.0};
  double update_ms{0.0};
  double total_ms{0.0};
  int frames{0};
  double fps() const { return total_ms > 0.0 ? 1000.0 * frames / total_ms : 0.0; }
};

class Tracker {
 public:
  Tracker(TrackerConfig cfg, CameraModel cam);

  // Feed one frame (index strictly greater than the last). Returns the
  // records emitted at this step; a track that just graduated from tentative
  // also flushes its buffered earlier frames, so records may carry past
  // frame stamps.
  std::vector<TrackRecord> step(int frame, std::vector<Detection> dets);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }
  double depth_unit_weight() const { return w_z_; }
  const StageTimings& timings() const { return timings_; }

  void set_motion_provider(std::shared_ptr<MotionProvider> p) { motion_ = std::move(p); }
  void set_debug_hook(std::function<void(const StepDebug&)> hook) { debug_ = std::move(hook); }

 private:
  TrackerConfig cfg_;
  CameraModel cam_;
  double w_z_;
  kalman::KfModel model_;
  std::vector<Track> tracks_;
  std::shared_ptr<MotionProvider> motion_;
  std::function<void(const StepDebug&)> debug_;
  int last_frame_{-1};
  int next_id_{1};
  StageTimings timings_;

  void predict_track(Track& t, int steps);
  void apply_match(Track& t, const Detection& d, int det_index,
                   std::vector<TrackRecord>& out);
  void spawn_track(const Detection& d, int det_index);
};

struct SequenceResult {
  std::vector<TrackRecord> records;  // sorted by (frame, id)
  StageTimings timings;
};

SequenceResult run_sequence(const std::map<int, std::vector<Detection>>& stream,
                            const TrackerConfig& cfg, const CameraModel& cam,
                            std::shared_ptr<MotionProvider> provider = nullptr,
                            std::function<void(const StepDebug&)> debug = nullptr);

}  // namespace dpmot
