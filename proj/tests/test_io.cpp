// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dpmot/errors.hpp"
#include "dpmot/io.hpp"
#include "dpmot/synth.hpp"

using namespace dpmot;

namespace {

std::string tmp_path(const std::string& name) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  return ::testing::TempDir() + info->test_suite_name() + "_" + info->name() +
         "_" + name;
}

void put_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  ASSERT_TRUE(out) << path;
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void push_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void push_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

std::string dpem_header(std::uint32_t dim, std::uint64_t count) {
  std::string buf = "DPEM";
  buf.push_back(char(1));
  push_u32(buf, dim);
  push_u64(buf, count);
  return buf;
}

}  // namespace

TEST(DetectionFile, RoundTripIsByteStable) {
  std::map<int, std::vector<Detection>> dets;
  Detection a;
  a.frame = 1;
  a.bbox = BBox{100.25, 50.5, 20.75, 40.0};
  a.confidence = 0.88;
  Detection b;
  b.frame = 1;
  b.bbox = BBox{-3.5, 0.25, 15.0, 30.5};
  b.confidence = 1.0;
  Detection c;
  c.frame = 3;
  c.bbox = BBox{300.0, 120.0, 25.0, 50.0};
  c.confidence = 0.5;
  dets[1] = {a, b};
  dets[3] = {c};

  const auto p1 = tmp_path("det.txt");
  const auto p2 = tmp_path("det2.txt");
  io::write_detections(p1, dets);

  const auto parsed = io::parse_detections(p1);
  ASSERT_EQ(parsed.size(), 2u);
  ASSERT_EQ(parsed.at(1).size(), 2u);
  EXPECT_DOUBLE_EQ(parsed.at(1)[0].bbox.x, 100.25);
  EXPECT_DOUBLE_EQ(parsed.at(1)[1].bbox.x, -3.5);  // file order kept
  EXPECT_DOUBLE_EQ(parsed.at(1)[0].confidence, 0.88);
  EXPECT_DOUBLE_EQ(parsed.at(3)[0].bbox.h, 50.0);

  io::write_detections(p2, parsed);
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(DetectionFile, MalformedRowsNameTheLine) {
  const auto p = tmp_path("det.txt");

  put_file(p, "1,-1,10,10,5,5,1,-1,-1,-1\n2,-1,10,10,5,5,1,-1,-1\n");
  try {
    io::parse_detections(p);
    FAIL() << "short row accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
  }

  put_file(p, "1,-1,10,10,0,5,1,-1,-1,-1\n");
  EXPECT_THROW(io::parse_detections(p), ParseError);  // zero width

  put_file(p, "1,-1,10,10,5x,5,1,-1,-1,-1\n");
  EXPECT_THROW(io::parse_detections(p), ParseError);

  put_file(p, "0,-1,10,10,5,5,1,-1,-1,-1\n");
  EXPECT_THROW(io::parse_detections(p), ParseError);  // frames start at 1

  put_file(p, "1,x,10,10,5,5,1,-1,-1,-1\n");
  EXPECT_THROW(io::parse_detections(p), ParseError);  // id must be numeric

  put_file(p, "\n  \n");
  EXPECT_THROW(io::parse_detections(p), EmptyFile);

  EXPECT_THROW(io::parse_detections(tmp_path("missing.txt")), Error);
}

TEST(GtFile, RoundTripAndConsideredFilter) {
  std::vector<io::GtRecord> rows;
  rows.push_back({1, 1, BBox{10.0, 20.0, 30.0, 60.0}, 1, 1, 1.0});
  rows.push_back({1, 2, BBox{50.0, 20.0, 30.0, 60.0}, 0, 1, 0.5});
  rows.push_back({2, 1, BBox{12.0, 20.0, 30.0, 60.0}, 1, 2, 1.0});
  rows.push_back({2, 3, BBox{90.25, 18.5, 28.0, 55.0}, 1, 1, 0.75});

  const auto p1 = tmp_path("gt.txt");
  const auto p2 = tmp_path("gt2.txt");
  io::write_gt(p1, rows);

  const auto parsed = io::parse_gt(p1);
  ASSERT_EQ(parsed.size(), rows.size());
  EXPECT_EQ(parsed[1].consider, 0);
  EXPECT_EQ(parsed[2].cls, 2);
  EXPECT_DOUBLE_EQ(parsed[3].visibility, 0.75);
  EXPECT_DOUBLE_EQ(parsed[3].bbox.x, 90.25);

  io::write_gt(p2, parsed);
  EXPECT_EQ(slurp(p1), slurp(p2));

  const auto considered = io::considered_records(parsed);
  ASSERT_EQ(considered.size(), 2u);  // consider and class both 1
  EXPECT_EQ(considered[0].id, 1);
  EXPECT_EQ(considered[0].frame, 1);
  EXPECT_EQ(considered[1].id, 3);
  EXPECT_DOUBLE_EQ(considered[1].confidence, 1.0);
}

TEST(SeqInfo, KnownKeysParseAndOthersPass) {
  const auto p = tmp_path("seqinfo.ini");
  put_file(p,
           "[Other]\nimWidth=99\n"
           "[Sequence]\nname=demo\nimDir=img1\nimWidth=1920\nimHeight=1080\n"
           "frameRate=30\nseqLength=500\nimExt=.jpg\nembeddingDim=128\n");
  const auto info = io::parse_seqinfo(p);
  EXPECT_EQ(info.name, "demo");
  EXPECT_EQ(info.img_w, 1920);
  EXPECT_EQ(info.img_h, 1080);
  EXPECT_DOUBLE_EQ(info.frame_rate, 30.0);
  EXPECT_EQ(info.n_frames, 500);
  EXPECT_EQ(info.embedding_dim, 128);

  put_file(p, "[Sequence]\nname=x\nimWidth=100\n");
  EXPECT_THROW(io::parse_seqinfo(p), MissingField);

  SequenceInfo out;
  out.name = "rt";
  out.img_w = 640;
  out.img_h = 480;
  out.frame_rate = 29.97;
  out.n_frames = 12;
  out.embedding_dim = 8;
  const auto p2 = tmp_path("seqinfo2.ini");
  io::write_seqinfo(p2, out);
  const auto back = io::parse_seqinfo(p2);
  EXPECT_EQ(back.name, "rt");
  EXPECT_EQ(back.img_w, 640);
  EXPECT_EQ(back.img_h, 480);
  EXPECT_DOUBLE_EQ(back.frame_rate, 29.97);
  EXPECT_EQ(back.n_frames, 12);
  EXPECT_EQ(back.embedding_dim, 8);
}

TEST(EmbeddingFile, BinaryRoundTripIsExact) {
  io::EmbeddingFile file;
  file.dim = 16;
  std::mt19937 rng(42);
  std::uniform_real_distribution<float> u(-5.0f, 5.0f);
  for (int k = 0; k < 1000; ++k) {
    io::EmbeddingRecord rec;
    rec.frame = static_cast<std::uint32_t>(k / 10 + 1);
    rec.det_index = static_cast<std::uint32_t>(k % 10);
    rec.values.resize(16);
    for (auto& v : rec.values) v = u(rng);
    file.records.push_back(std::move(rec));
  }

  const auto p = tmp_path("emb.dpem");
  io::write_embeddings(p, file);
  EXPECT_EQ(slurp(p).size(), 17u + 1000u * (8u + 4u * 16u));

  const auto back = io::read_embeddings(p);
  EXPECT_EQ(back.version, 1);
  EXPECT_EQ(back.dim, 16u);
  ASSERT_EQ(back.records.size(), file.records.size());
  for (std::size_t k = 0; k < file.records.size(); ++k) {
    EXPECT_EQ(back.records[k].frame, file.records[k].frame);
    EXPECT_EQ(back.records[k].det_index, file.records[k].det_index);
    for (int i = 0; i < 16; ++i)
      EXPECT_EQ(back.records[k].values[i], file.records[k].values[i]);
  }
}

TEST(EmbeddingFile, HeaderAndRecordValidation) {
  const auto p = tmp_path("emb.dpem");

  put_file(p, dpem_header(4, 0).substr(0, 10));
  try {
    io::read_embeddings(p);
    FAIL() << "short header accepted";
  } catch (const TruncatedFile& e) {
    EXPECT_EQ(e.offset, 10u);
  }

  {
    std::string buf = dpem_header(4, 0);
    buf[0] = 'X';
    put_file(p, buf);
    EXPECT_THROW(io::read_embeddings(p), BadMagic);
  }

  put_file(p, dpem_header(0, 0));
  EXPECT_THROW(io::read_embeddings(p), DimMismatch);
  put_file(p, dpem_header(9000, 0));
  EXPECT_THROW(io::read_embeddings(p), DimMismatch);

  {
    // second record cut short: complain at its start offset
    std::string buf = dpem_header(4, 2);
    push_u32(buf, 1);
    push_u32(buf, 0);
    for (int i = 0; i < 4; ++i) push_u32(buf, 0x3f800000u);  // 1.0f
    buf.append(3, '\x01');
    put_file(p, buf);
    try {
      io::read_embeddings(p);
      FAIL() << "truncated record accepted";
    } catch (const TruncatedFile& e) {
      EXPECT_EQ(e.offset, 17u + 24u);
    }
  }

  {
    std::string buf = dpem_header(4, 1);
    push_u32(buf, 1);
    push_u32(buf, 0);
    for (int i = 0; i < 4; ++i) push_u32(buf, 0);
    buf += "junk";
    put_file(p, buf);
    EXPECT_THROW(io::read_embeddings(p), ParseError);
  }

  io::EmbeddingFile bad;
  bad.dim = 0;
  EXPECT_THROW(io::write_embeddings(p, bad), DimMismatch);
  bad.dim = 4;
  bad.records.push_back({1, 0, {1.0f, 2.0f}});  // width disagrees with header
  EXPECT_THROW(io::write_embeddings(p, bad), DimMismatch);
}

TEST(EmbeddingFile, AttachAndCollect) {
  std::map<int, std::vector<Detection>> dets;
  Detection d;
  d.bbox = BBox{0, 0, 10, 10};
  d.frame = 1;
  dets[1] = {d, d};
  d.frame = 2;
  dets[2] = {d};

  io::EmbeddingFile file;
  file.dim = 3;
  file.records.push_back({1, 0, {1.0f, 0.0f, 0.0f}});
  file.records.push_back({1, 1, {0.0f, 1.0f, 0.0f}});
  file.records.push_back({2, 0, {0.0f, 0.0f, 1.0f}});

  EXPECT_THROW(io::attach_embeddings(dets, file, 4), DimMismatch);

  io::attach_embeddings(dets, file, 3);
  ASSERT_EQ(dets[1][0].embedding.size(), 3);
  EXPECT_DOUBLE_EQ(dets[1][0].embedding(0), 1.0);
  EXPECT_DOUBLE_EQ(dets[1][1].embedding(1), 1.0);
  EXPECT_DOUBLE_EQ(dets[2][0].embedding(2), 1.0);

  const auto collected = io::collect_embeddings(dets);
  EXPECT_EQ(collected.dim, 3u);
  ASSERT_EQ(collected.records.size(), 3u);
  EXPECT_EQ(collected.records[0].frame, 1u);
  EXPECT_EQ(collected.records[0].det_index, 0u);
  EXPECT_EQ(collected.records[2].frame, 2u);
  EXPECT_EQ(collected.records[1].values[1], 1.0f);

  io::EmbeddingFile missing_frame;
  missing_frame.dim = 3;
  missing_frame.records.push_back({7, 0, {0.0f, 0.0f, 0.0f}});
  EXPECT_THROW(io::attach_embeddings(dets, missing_frame, 3), Error);

  io::EmbeddingFile bad_index;
  bad_index.dim = 3;
  bad_index.records.push_back({2, 5, {0.0f, 0.0f, 0.0f}});
  EXPECT_THROW(io::attach_embeddings(dets, bad_index, 3), Error);
}

TEST(CameraFile, RoundTripAndDefaults) {
  CameraModel cam = CameraModel::defaults(960, 540);
  cam.f = 1000.5;
  cam.u_c = 480.25;
  cam.v_c = 270.125;
  cam.height = 4.5;
  cam.pitch = 15.0 * M_PI / 180.0;
  cam.yaw = -0.1;
  cam.roll = 0.05;

  const auto p = tmp_path("calib.txt");
  io::write_camera(p, cam);
  const auto back = io::parse_camera(p, 960, 540);
  EXPECT_DOUBLE_EQ(back.f, cam.f);
  EXPECT_DOUBLE_EQ(back.u_c, cam.u_c);
  EXPECT_DOUBLE_EQ(back.v_c, cam.v_c);
  EXPECT_DOUBLE_EQ(back.height, cam.height);
  EXPECT_DOUBLE_EQ(back.pitch, cam.pitch);
  EXPECT_DOUBLE_EQ(back.yaw, cam.yaw);
  EXPECT_DOUBLE_EQ(back.roll, cam.roll);
  EXPECT_EQ(back.img_w, 960);
  EXPECT_EQ(back.img_h, 540);

  // sparse files keep the sized defaults; comments and bare pairs are fine
  put_file(p, "# overhead rig\nf 800\n");
  const auto sparse = io::parse_camera(p, 960, 540);
  EXPECT_DOUBLE_EQ(sparse.f, 800.0);
  EXPECT_DOUBLE_EQ(sparse.u_c, 480.0);
  EXPECT_DOUBLE_EQ(sparse.v_c, 270.0);
  EXPECT_DOUBLE_EQ(sparse.height, 1.0);
  EXPECT_DOUBLE_EQ(sparse.pitch, 0.0);

  put_file(p, "focal = 800\n");
  EXPECT_THROW(io::parse_camera(p, 960, 540), ConfigError);
}

TEST(TrackFile, RoundTripSortsRows) {
  std::vector<TrackRecord> recs;
  recs.push_back({2, 5, BBox{10.0, 10.0, 5.0, 8.0}, 1.0});
  recs.push_back({1, 9, BBox{20.0, 12.0, 5.0, 8.0}, 0.75});
  recs.push_back({1, 2, BBox{30.0, 14.0, 5.0, 8.0}, 0.5});

  const auto p1 = tmp_path("tracks.txt");
  const auto p2 = tmp_path("tracks2.txt");
  io::write_tracks(p1, recs);

  const auto parsed = io::parse_tracks(p1);
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[0].frame, 2);
  EXPECT_EQ(parsed[0].id, 1);
  EXPECT_EQ(parsed[1].frame, 5);
  EXPECT_EQ(parsed[1].id, 2);
  EXPECT_EQ(parsed[2].frame, 9);
  EXPECT_EQ(parsed[2].id, 1);
  EXPECT_DOUBLE_EQ(parsed[0].confidence, 0.5);

  io::write_tracks(p2, parsed);
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(OrderFile, RoundTripAndDuplicateFrame) {
  std::map<int, std::vector<int>> orders;
  orders[1] = {0, 2, 1};
  orders[5] = {};
  orders[9] = {3};

  const auto p = tmp_path("depth_order.csv");
  io::write_order_csv(p, orders);
  EXPECT_EQ(slurp(p), "1,0,2,1\n5\n9,3\n");
  EXPECT_EQ(io::parse_order_csv(p), orders);

  put_file(p, "3,0\n3,1\n");
  EXPECT_THROW(io::parse_order_csv(p), ParseError);
}

TEST(ConfigFile, EveryKeyLandsOnItsField) {
  const auto p = tmp_path("tracker.cfg");
  put_file(p,
           "# tracker settings\n"
           "alpha = 0.7\n"
           "beta = 0.3\n"
           "tau_z = 4\n"
           "tau-z-pixels = true\n"
           "tau_gate = 0.8\n"
           "tau_c = 0.2\n"
           "min_hits = 2\n"
           "max_age = 15\n"
           "sigma = 0.5\n"
           "depth-unit-weight = 1.25\n"
           "depth_bins_scale = 60\n"
           "conf_threshold = 0.2\n"
           "appearance-momentum = 0.85\n"
           "s_d = 50\n"
           "s_a = 0.25\n"
           "motion = 3dkf\n"
           "association = first-order\n"
           "moving_camera = yes\n"
           "motion_provider = flow-file\n");
  const auto cfg = io::parse_config(p);
  EXPECT_DOUBLE_EQ(cfg.alpha, 0.7);
  EXPECT_DOUBLE_EQ(cfg.beta, 0.3);
  EXPECT_DOUBLE_EQ(cfg.tau_z, 4.0);
  EXPECT_TRUE(cfg.tau_z_pixels);
  EXPECT_DOUBLE_EQ(cfg.tau_gate, 0.8);
  EXPECT_DOUBLE_EQ(cfg.tau_c, 0.2);
  EXPECT_EQ(cfg.min_hits, 2);
  EXPECT_EQ(cfg.max_age, 15);
  EXPECT_DOUBLE_EQ(cfg.sigma, 0.5);
  EXPECT_DOUBLE_EQ(cfg.w_z, 1.25);
  EXPECT_DOUBLE_EQ(cfg.lambda_q, 60.0);
  EXPECT_DOUBLE_EQ(cfg.conf_threshold, 0.2);
  EXPECT_DOUBLE_EQ(cfg.appearance_momentum, 0.85);
  EXPECT_DOUBLE_EQ(cfg.s_d, 50.0);
  EXPECT_DOUBLE_EQ(cfg.s_a, 0.25);
  EXPECT_EQ(cfg.motion, MotionModel::Kf3d);
  EXPECT_EQ(cfg.association, AssociationMode::FirstOrder);
  EXPECT_TRUE(cfg.moving_camera);
  EXPECT_EQ(cfg.motion_provider, "flow-file");
}

TEST(ConfigFile, PresetsAndRejections) {
  const auto p = tmp_path("tracker.cfg");
  put_file(p, "weights_preset = appendix\n");
  auto cfg = io::parse_config(p);
  EXPECT_DOUBLE_EQ(cfg.alpha, 0.45);
  EXPECT_DOUBLE_EQ(cfg.beta, 0.55);

  put_file(p, "weights_preset = main\n");
  cfg = io::parse_config(p);
  EXPECT_DOUBLE_EQ(cfg.alpha, 0.6);
  EXPECT_DOUBLE_EQ(cfg.beta, 0.4);

  put_file(p, "warp_speed = 9\n");
  EXPECT_THROW(io::parse_config(p), ConfigError);
  put_file(p, "min_hits = soon\n");
  EXPECT_THROW(io::parse_config(p), ConfigError);
  put_file(p, "weights_preset = both\n");
  EXPECT_THROW(io::parse_config(p), ConfigError);

  TrackerConfig direct;
  io::apply_config_entry(direct, "tau-gate", "0.6");  // dashes alias underscores
  EXPECT_DOUBLE_EQ(direct.tau_gate, 0.6);
}

TEST(FlowFile, ParsesDeltaTable) {
  const auto p = tmp_path("flow.txt");
  put_file(p, "4,2,1.5,-0.5,2.5,0.25\n7,0,0,0,1,1\n");
  const auto table = io::parse_flow(p);
  ASSERT_EQ(table.size(), 2u);
  const auto& d = table.at({4, 2});
  EXPECT_DOUBLE_EQ(d.prev.x(), 1.5);
  EXPECT_DOUBLE_EQ(d.prev.y(), -0.5);
  EXPECT_DOUBLE_EQ(d.next.x(), 2.5);
  EXPECT_DOUBLE_EQ(d.next.y(), 0.25);

  put_file(p, "4,2,1.5,-0.5,2.5\n");
  EXPECT_THROW(io::parse_flow(p), ParseError);
}

TEST(ScenarioFile, HandWrittenFileParses) {
  const auto p = tmp_path("scene.txt");
  put_file(p,
           "name demo\n"
           "frames 3\n"
           "width 640\n"
           "height 480\n"
           "seed 5\n"
           "camera f=500 height=2\n"
           "agent id=1 height=1.8\n"
           "waypoint agent=1 frame=1 x=0 z=6\n"
           "waypoint agent=1 frame=3 x=1 z=6\n"
           "agent id=2\n"
           "waypoint agent=2 frame=1 x=2 z=9\n"
           "waypoint agent=2 frame=3 x=2 z=9\n"
           "occlusion begin=2 end=2 a=1 b=2 mode=drop_far\n");
  const auto s = io::parse_scenario(p);
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.n_frames, 3);
  EXPECT_EQ(s.seed, 5u);
  EXPECT_DOUBLE_EQ(s.camera.f, 500.0);
  EXPECT_DOUBLE_EQ(s.camera.height, 2.0);
  EXPECT_DOUBLE_EQ(s.camera.u_c, 320.0);  // default for 640x480
  ASSERT_EQ(s.agents.size(), 2u);
  EXPECT_DOUBLE_EQ(s.agents[0].height, 1.8);
  EXPECT_DOUBLE_EQ(s.agents[1].height, 1.7);
  ASSERT_EQ(s.occlusions.size(), 1u);
  EXPECT_EQ(s.occlusions[0].mode, synth::OcclusionMode::DropFar);

  const auto seq = synth::render(s);
  EXPECT_EQ(seq.detections.at(1).size(), 2u);
  EXPECT_EQ(seq.detections.at(2).size(), 1u);
}

TEST(ScenarioFile, WriteParseRenderIdentity) {
  for (const auto& s : {synth::scenarios::bounce_crossing(9),
                        synth::scenarios::ego_moving(2, 4)}) {
    const auto p = tmp_path("scene_" + s.name + ".txt");
    io::write_scenario(p, s);
    const auto back = io::parse_scenario(p);
    EXPECT_EQ(back.name, s.name);
    EXPECT_EQ(back.n_frames, s.n_frames);
    EXPECT_EQ(back.seed, s.seed);
    EXPECT_EQ(back.embedding_dim, s.embedding_dim);
    EXPECT_EQ(back.moving_camera, s.moving_camera);
    ASSERT_EQ(back.camera_path.size(), s.camera_path.size());

    const auto r1 = synth::render(s);
    const auto r2 = synth::render(back);
    ASSERT_EQ(r1.gt.size(), r2.gt.size());
    for (std::size_t k = 0; k < r1.gt.size(); ++k) {
      EXPECT_EQ(r1.gt[k].id, r2.gt[k].id);
      EXPECT_DOUBLE_EQ(r1.gt[k].bbox.x, r2.gt[k].bbox.x);
      EXPECT_DOUBLE_EQ(r1.gt[k].bbox.h, r2.gt[k].bbox.h);
    }
    for (const auto& [frame, dets] : r1.detections) {
      const auto& other = r2.detections.at(frame);
      ASSERT_EQ(dets.size(), other.size());
      for (std::size_t k = 0; k < dets.size(); ++k) {
        EXPECT_DOUBLE_EQ(dets[k].bbox.bottom(), other[k].bbox.bottom());
        ASSERT_EQ(dets[k].embedding.size(), other[k].embedding.size());
        for (int i = 0; i < dets[k].embedding.size(); ++i)
          EXPECT_DOUBLE_EQ(dets[k].embedding(i), other[k].embedding(i));
      }
    }
  }
}

TEST(ScenarioFile, StructuralErrorsAreRejected) {
  const auto p = tmp_path("scene.txt");

  put_file(p, "frames 5\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // no agents

  put_file(p, "agent id=1\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // agent with no waypoints

  put_file(p, "agent id=1\nwaypoint agent=2 frame=1 x=0 z=5\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // unknown agent reference

  put_file(p,
           "agent id=1\nwaypoint agent=1 frame=5 x=0 z=5\n"
           "waypoint agent=1 frame=3 x=0 z=5\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // frames must ascend

  put_file(p, "agent id=1\nwaypoint agent=1 frame=1 x=0 z=5\ngravity 9\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // unknown scalar key

  put_file(p,
           "camera zoom=2\nagent id=1\nwaypoint agent=1 frame=1 x=0 z=5\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // unknown camera key

  put_file(p,
           "agent id=1\nwaypoint agent=1 frame=1 x=0 z=5\n"
           "occlusion begin=1 end=1 a=1 b=1 mode=vanish\n");
  EXPECT_THROW(io::parse_scenario(p), ParseError);  // unknown occlusion mode
}
