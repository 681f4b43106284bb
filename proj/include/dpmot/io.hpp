// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dpmot/kalman.hpp"
#include "dpmot/synth.hpp"
#include "dpmot/track.hpp"
#include "dpmot/types.hpp"

// Bit-exact parsers and writers: MOT Challenge text files, the binary
// embedding sidecar, camera calibration, tracker configuration, depth-order
// truth files, and scenario descriptions. Writers are deterministic byte for
// byte; parsers reject malformed fields instead of patching them up.
namespace dpmot::io {

// det.txt rows: frame,id,left,top,w,h,conf,x,y,z (id and tail may be -1)
std::map<int, std::vector<Detection>> parse_detections(const std::string& path);
void write_detections(const std::string& path,
                      const std::map<int, std::vector<Detection>>& dets);

struct GtRecord {
  int frame{1};
  int id{1};
  BBox bbox;
  int consider{1};
  int cls{1};
  double visibility{1.0};
};

// gt.txt rows: frame,id,left,top,w,h,consider,class,visibility
std::vector<GtRecord> parse_gt(const std::string& path);
void write_gt(const std::string& path, const std::vector<GtRecord>& rows);

// keeps rows with consider == 1 and class == 1
std::vector<TrackRecord> considered_records(const std::vector<GtRecord>& rows);

SequenceInfo parse_seqinfo(const std::string& path);
void write_seqinfo(const std::string& path, const SequenceInfo& info);

// binary embedding sidecar, header magic "DPEM"
struct EmbeddingRecord {
  std::uint32_t frame{0};
  std::uint32_t det_index{0};  // k-th detection row of that frame, 0-based
  std::vector<float> values;
};

struct EmbeddingFile {
  std::uint8_t version{1};
  std::uint32_t dim{0};
  std::vector<EmbeddingRecord> records;
};

EmbeddingFile read_embeddings(const std::string& path);
void write_embeddings(const std::string& path, const EmbeddingFile& file);

// copies vectors onto the referenced detections; expected_dim > 0 enforces
// the configured embedding width
void attach_embeddings(std::map<int, std::vector<Detection>>& dets,
                       const EmbeddingFile& file, int expected_dim = 0);
EmbeddingFile collect_embeddings(
    const std::map<int, std::vector<Detection>>& dets);

// key-value calibration text: f, u_c, v_c, Y_c, theta_x, theta_y, theta_z
// (angles in radians); missing keys keep the defaults for (img_w, img_h)
CameraModel parse_camera(const std::string& path, int img_w, int img_h);
void write_camera(const std::string& path, const CameraModel& cam);

// MOT submission rows: frame,id,left,top,w,h,conf,-1,-1,-1
std::vector<TrackRecord> parse_tracks(const std::string& path);
void write_tracks(const std::string& path, std::vector<TrackRecord> records);

// depth-order truth rows: frame,i0,i1,... (detection indices, nearest first)
std::map<int, std::vector<int>> parse_order_csv(const std::string& path);
void write_order_csv(const std::string& path,
                     const std::map<int, std::vector<int>>& orders);

// tracker configuration: one key per TrackerConfig field, plus
// weights_preset = main | appendix
void apply_config_entry(TrackerConfig& cfg, const std::string& key,
                        const std::string& value);
TrackerConfig parse_config(const std::string& path);

// motion-delta rows: frame,det_index,dx_prev,dy_prev,dx_next,dy_next
std::map<std::pair<int, int>, kalman::MotionDeltas> parse_flow(
    const std::string& path);

// scenario description file, documented in docs/FORMATS.md
synth::Scenario parse_scenario(const std::string& path);
void write_scenario(const std::string& path, const synth::Scenario& s);

}  // namespace dpmot::io
