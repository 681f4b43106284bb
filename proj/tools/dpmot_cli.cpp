// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
//
// dpmot command line: track / eval / synth / sode-check / ablate.
// Exit codes: 0 ok, 1 threshold gate failed, 2 I/O error, 3 config error.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpmot/errors.hpp"
#include "dpmot/io.hpp"
#include "dpmot/metrics.hpp"
#include "dpmot/sode.hpp"
#include "dpmot/synth.hpp"
#include "dpmot/track.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigFlags {
  std::string config_path;
  // raw flag values, applied through the same code path as the config file
  std::vector<std::pair<std::string, std::string>> entries;

  dpmot::TrackerConfig build() const {
    dpmot::TrackerConfig cfg;
    if (!config_path.empty()) cfg = dpmot::io::parse_config(config_path);
    // preset first so explicit alpha/beta still win
    for (const auto& [k, v] : entries)
      if (k == "weights_preset") dpmot::io::apply_config_entry(cfg, k, v);
    for (const auto& [k, v] : entries)
      if (k != "weights_preset") dpmot::io::apply_config_entry(cfg, k, v);
    return cfg;
  }
};

// one option per tracker config key; values funnel through apply_config_entry
void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config,-c", flags.config_path, "key-value config file");
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"alpha", "--alpha"},
      {"beta", "--beta"},
      {"tau_z", "--tau-z,--tau_z"},
      {"tau_z_pixels", "--tau-z-pixels,--tau_z_pixels"},
      {"tau_gate", "--tau-gate,--tau_gate"},
      {"tau_c", "--tau-c,--tau_c"},
      {"min_hits", "--min-hits,--min_hits"},
      {"max_age", "--max-age,--max_age"},
      {"sigma", "--sigma"},
      {"depth_unit_weight", "--depth-unit-weight,--w-z,--w_z"},
      {"depth_bins_scale", "--depth-bins-scale,--lambda-q,--lambda_q"},
      {"conf_threshold", "--conf-threshold,--conf_threshold"},
      {"appearance_momentum", "--appearance-momentum,--appearance_momentum"},
      {"s_d", "--s-d,--s_d"},
      {"s_a", "--s-a,--s_a"},
      {"motion", "--motion,--ablation-motion"},
      {"association", "--association,--ablation-assoc"},
      {"moving_camera", "--moving-camera,--moving_camera"},
      {"motion_provider", "--motion-provider,--motion_provider"},
      {"weights_preset", "--weights-preset,--weights_preset"},
  };
  for (const auto& [key, names] : keys) {
    const std::string k = key;
    auto* opt = cmd->add_option_function<std::string>(
        names,
        [&flags, k](const std::string& v) { flags.entries.emplace_back(k, v); },
        "tracker config '" + k + "'");
    opt->expected(1);
  }
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  const int count = std::min<std::size_t>(workers, n);
  for (int w = 0; w < count; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string seq_name(const fs::path& dir) {
  fs::path p = dir;
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

struct SeqData {
  std::string name;
  fs::path dir;
  dpmot::SequenceInfo info;
  dpmot::CameraModel cam;
  std::map<int, std::vector<dpmot::Detection>> dets;
  std::vector<dpmot::TrackRecord> gt;
  std::map<int, std::vector<int>> truth_orders;
};

SeqData load_sequence(const fs::path& dir, const std::string& calib_override,
                      bool need_dets, bool need_gt) {
  SeqData s;
  s.dir = dir;
  s.name = seq_name(dir);
  s.info = dpmot::io::parse_seqinfo((dir / "seqinfo.ini").string());
  if (s.info.name.empty()) s.info.name = s.name;

  const fs::path calib =
      calib_override.empty() ? dir / "calib.txt" : fs::path(calib_override);
  if (fs::exists(calib))
    s.cam = dpmot::io::parse_camera(calib.string(), s.info.img_w, s.info.img_h);
  else
    s.cam = dpmot::CameraModel::defaults(s.info.img_w, s.info.img_h);

  const fs::path det_path = dir / "det" / "det.txt";
  if (need_dets) {
    if (!fs::exists(det_path))
      throw dpmot::Error("missing detection file " + det_path.string());
    s.dets = dpmot::io::parse_detections(det_path.string());
    const fs::path emb = dir / "det" / "embeddings.dpem";
    if (fs::exists(emb))
      dpmot::io::attach_embeddings(s.dets, dpmot::io::read_embeddings(emb.string()),
                                   s.info.embedding_dim);
    // feed every frame, including empty ones, so misses accrue on gaps
    int last = s.info.n_frames;
    if (last <= 0 && !s.dets.empty()) last = s.dets.rbegin()->first;
    for (int f = 1; f <= last; ++f) s.dets.try_emplace(f);
  }

  if (need_gt) {
    const fs::path gt_path = dir / "gt" / "gt.txt";
    if (!fs::exists(gt_path))
      throw dpmot::Error("missing ground-truth file " + gt_path.string());
    s.gt = dpmot::io::considered_records(dpmot::io::parse_gt(gt_path.string()));
  }
  const fs::path order_path = dir / "gt" / "depth_order.csv";
  if (fs::exists(order_path))
    s.truth_orders = dpmot::io::parse_order_csv(order_path.string());
  return s;
}

std::shared_ptr<dpmot::MotionProvider> motion_provider_for(
    const SeqData& s, const dpmot::TrackerConfig& cfg,
    const std::string& flow_override) {
  if (cfg.motion_provider != "flow-file") return nullptr;  // tracker default
  const fs::path flow =
      flow_override.empty() ? s.dir / "flow.txt" : fs::path(flow_override);
  if (!fs::exists(flow))
    throw dpmot::Error("motion provider 'flow-file' needs " + flow.string());
  return std::make_shared<dpmot::FlowFileMotion>(
      dpmot::io::parse_flow(flow.string()));
}

void write_matrix_csv(const fs::path& path, const dpmot::MatX& m) {
  if (m.size() == 0) return;
  std::ofstream out(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.9g", m(i, j));
      out << buf;
    }
    out << '\n';
  }
}

std::string svg_color(int id) {
  static const char* palette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231",
                                  "#911eb4", "#46f0f0", "#f032e6", "#bcf60c",
                                  "#fabebe", "#008080", "#e6beff", "#9a6324"};
  return palette[id % 12];
}

void write_overlay(const fs::path& path, const dpmot::SequenceInfo& info,
                   const std::vector<dpmot::TrackRecord>& tracks,
                   const std::vector<dpmot::Detection>& dets) {
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << info.img_w
      << "\" height=\"" << info.img_h << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"#202020\"/>\n";
  for (const auto& d : dets) {
    out << "  <rect x=\"" << d.bbox.x << "\" y=\"" << d.bbox.y << "\" width=\""
        << d.bbox.w << "\" height=\"" << d.bbox.h
        << "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    if (d.depth_order >= 0)
      out << "  <text x=\"" << d.bbox.x + 2 << "\" y=\"" << d.bbox.bottom() - 4
          << "\" fill=\"#cccccc\" font-size=\"12\">z" << d.depth_order
          << "</text>\n";
  }
  for (const auto& t : tracks) {
    out << "  <rect x=\"" << t.bbox.x << "\" y=\"" << t.bbox.y << "\" width=\""
        << t.bbox.w << "\" height=\"" << t.bbox.h << "\" fill=\"none\" stroke=\""
        << svg_color(t.id) << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << t.bbox.x + 2 << "\" y=\"" << t.bbox.y + 14
        << "\" fill=\"" << svg_color(t.id) << "\" font-size=\"14\">#" << t.id
        << "</text>\n";
  }
  out << "</svg>\n";
}

struct TrackArgs {
  std::vector<std::string> seq_dirs;
  std::string out_dir{"dpmot_out"};
  std::string calib;
  std::string flow_file;
  ConfigFlags flags;
  long seed{0};
  bool overlay{false};
  bool dump_cost{false};
  int workers{0};
};

void run_track_one(const TrackArgs& a, const SeqData& s,
                   const dpmot::TrackerConfig& cfg) {
  const fs::path out_dir(a.out_dir);

  std::function<void(const dpmot::StepDebug&)> debug;
  fs::path cost_dir;
  if (a.dump_cost) {
    cost_dir = out_dir / (s.name + ".cost");
    fs::create_directories(cost_dir);
    debug = [&cost_dir](const dpmot::StepDebug& d) {
      char stem[32];
      std::snprintf(stem, sizeof(stem), "frame_%06d", d.frame);
      write_matrix_csv(cost_dir / (std::string(stem) + ".appearance.csv"),
                       d.components->appearance);
      write_matrix_csv(cost_dir / (std::string(stem) + ".diou.csv"),
                       d.components->diou);
      write_matrix_csv(cost_dir / (std::string(stem) + ".second_spatial.csv"),
                       d.components->second_spatial);
      write_matrix_csv(cost_dir / (std::string(stem) + ".second_appearance.csv"),
                       d.components->second_appearance);
      write_matrix_csv(cost_dir / (std::string(stem) + ".fused.csv"),
                       d.fused->cost);
    };
  }

  auto provider = motion_provider_for(s, cfg, a.flow_file);
  const auto result = dpmot::run_sequence(s.dets, cfg, s.cam, provider, debug);

  dpmot::io::write_tracks((out_dir / (s.name + ".txt")).string(), result.records);

  json timing;
  timing["sequence"] = s.name;
  timing["frames"] = result.timings.frames;
  timing["fps"] = result.timings.fps();
  timing["total_ms"] = result.timings.total_ms;
  timing["stages_ms"] = {{"sode", result.timings.sode_ms},
                         {"predict", result.timings.predict_ms},
                         {"associate", result.timings.associate_ms},
                         {"assign", result.timings.assign_ms},
                         {"update", result.timings.update_ms}};
  std::ofstream tf(out_dir / (s.name + ".timing.json"));
  tf << timing.dump(2) << '\n';

  if (a.overlay) {
    const fs::path ov_dir = out_dir / (s.name + ".overlay");
    fs::create_directories(ov_dir);
    std::map<int, std::vector<dpmot::TrackRecord>> by_frame;
    for (const auto& r : result.records) by_frame[r.frame].push_back(r);
    for (const auto& [frame, dets] : s.dets) {
      auto annotated = dets;
      dpmot::sode::order_detections(annotated, s.cam,
                                    {cfg.lambda_q, cfg.moving_camera});
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%06d.svg", frame);
      write_overlay(ov_dir / name, s.info, by_frame[frame], annotated);
    }
  }
}

int cmd_track(const TrackArgs& a) {
  const dpmot::TrackerConfig cfg = a.flags.build();
  fs::create_directories(a.out_dir);
  std::vector<SeqData> seqs(a.seq_dirs.size());
  parallel_for(a.seq_dirs.size(), a.workers, [&](std::size_t i) {
    seqs[i] = load_sequence(a.seq_dirs[i], a.calib, true, false);
    run_track_one(a, seqs[i], cfg);
  });
  for (const auto& s : seqs)
    std::cout << s.name << ": wrote " << (fs::path(a.out_dir) / (s.name + ".txt")).string()
              << '\n';
  return 0;
}

struct EvalRow {
  std::string name;
  dpmot::metrics::MotReport rep;
  std::size_t hyp_count{0};
};

std::string pct(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * ratio);
  return buf;
}

struct EvalArgs {
  std::vector<std::string> seq_dirs;
  std::string tracks_dir;
  std::string csv_path;
  double min_mota{-1e9};
  double iou{0.5};
  int workers{0};
  long seed{0};
};

int cmd_eval(const EvalArgs& a) {
  std::vector<EvalRow> rows(a.seq_dirs.size());
  parallel_for(a.seq_dirs.size(), a.workers, [&](std::size_t i) {
    SeqData s = load_sequence(a.seq_dirs[i], "", false, true);
    const fs::path hyp_path = fs::path(a.tracks_dir) / (s.name + ".txt");
    if (!fs::exists(hyp_path))
      throw dpmot::Error("missing track file " + hyp_path.string());
    const auto hyp = dpmot::io::parse_tracks(hyp_path.string());
    rows[i] = {s.name, dpmot::metrics::clear_mot(s.gt, hyp, a.iou), hyp.size()};
  });

  // overall = counts summed, ratios recomputed from the sums
  double fn = 0, fp = 0, idsw = 0, gt_boxes = 0, idtp2 = 0, hyp_boxes = 0;
  int mt = 0, ml = 0, frag = 0, gt_tracks = 0;
  for (const auto& r : rows) {
    fn += r.rep.false_negatives;
    fp += r.rep.false_positives;
    idsw += r.rep.id_switches;
    gt_boxes += r.rep.gt_count;
    hyp_boxes += static_cast<double>(r.hyp_count);
    idtp2 += r.rep.idf1 * (r.rep.gt_count + static_cast<double>(r.hyp_count));
    mt += r.rep.mostly_tracked;
    ml += r.rep.mostly_lost;
    frag += r.rep.fragments;
    gt_tracks += r.rep.gt_tracks;
  }
  const double mota = gt_boxes > 0 ? 1.0 - (fn + fp + idsw) / gt_boxes : 0.0;
  const double idf1 =
      (gt_boxes + hyp_boxes) > 0 ? idtp2 / (gt_boxes + hyp_boxes) : 1.0;

  std::ostringstream table;
  table << "sequence,MOTA,IDF1,MT,ML,IDSw,Frag,FP,FN\n";
  for (const auto& r : rows)
    table << r.name << ',' << pct(r.rep.mota) << ',' << pct(r.rep.idf1) << ','
          << r.rep.mostly_tracked << ',' << r.rep.mostly_lost << ','
          << r.rep.id_switches << ',' << r.rep.fragments << ','
          << r.rep.false_positives << ',' << r.rep.false_negatives << '\n';
  table << "OVERALL," << pct(mota) << ',' << pct(idf1) << ',' << mt << ',' << ml
        << ',' << static_cast<long>(idsw) << ',' << frag << ','
        << static_cast<long>(fp) << ',' << static_cast<long>(fn) << '\n';

  std::cout << table.str();
  if (!a.csv_path.empty()) {
    if (fs::path(a.csv_path).has_parent_path())
      fs::create_directories(fs::path(a.csv_path).parent_path());
    std::ofstream out(a.csv_path);
    out << table.str();
  }
  if (100.0 * mota < a.min_mota) {
    char req[32];
    std::snprintf(req, sizeof(req), "%.2f", a.min_mota);
    std::cerr << "MOTA " << pct(mota) << "% below required " << req << "%\n";
    return 1;
  }
  return 0;
}

struct SynthArgs {
  std::string scenario_path;
  std::string preset;
  std::string out_dir{"dpmot_synth"};
  std::string name;
  long seed{0};
  bool seed_set{false};
  int agents{10};
  int frames{60};
  double pitch_deg{5.0};
  double z_min{2.0};
  double z_max{50.0};
  double min_sep{0.5};
  double det_noise{0.0};
};

int cmd_synth(const SynthArgs& a) {
  dpmot::synth::Scenario sc;
  if (!a.scenario_path.empty()) {
    sc = dpmot::io::parse_scenario(a.scenario_path);
    if (a.seed_set) sc.seed = static_cast<unsigned>(a.seed);
  } else {
    const unsigned seed = static_cast<unsigned>(a.seed);
    if (a.preset == "static")
      sc = dpmot::synth::scenarios::random_static(seed, a.agents, a.pitch_deg,
                                                  a.z_min, a.z_max, a.min_sep,
                                                  a.det_noise);
    else if (a.preset == "ego")
      sc = dpmot::synth::scenarios::ego_moving(seed, a.agents);
    else if (a.preset == "bounce")
      sc = dpmot::synth::scenarios::bounce_crossing(seed);
    else if (a.preset == "merged")
      sc = dpmot::synth::scenarios::merged_pair(seed);
    else if (a.preset == "parallel")
      sc = dpmot::synth::scenarios::easy_parallel(a.agents, a.frames, seed);
    else
      throw dpmot::ConfigError("synth needs a scenario file or a valid --preset");
  }
  if (!a.name.empty()) sc.name = a.name;

  const auto rendered = dpmot::synth::render(sc);
  const fs::path dir = fs::path(a.out_dir) / sc.name;
  fs::create_directories(dir / "det");
  fs::create_directories(dir / "gt");

  dpmot::io::write_seqinfo((dir / "seqinfo.ini").string(), rendered.info);
  dpmot::io::write_detections((dir / "det" / "det.txt").string(),
                              rendered.detections);
  std::vector<dpmot::io::GtRecord> gt_rows;
  gt_rows.reserve(rendered.gt.size());
  for (const auto& r : rendered.gt)
    gt_rows.push_back({r.frame, r.id, r.bbox, 1, 1, 1.0});
  dpmot::io::write_gt((dir / "gt" / "gt.txt").string(), gt_rows);
  dpmot::io::write_order_csv((dir / "gt" / "depth_order.csv").string(),
                             rendered.true_orders);
  dpmot::io::write_camera((dir / "calib.txt").string(), sc.camera);
  dpmot::io::write_scenario((dir / "scenario.txt").string(), sc);
  if (sc.embedding_dim > 0) {
    const auto ef = dpmot::io::collect_embeddings(rendered.detections);
    if (!ef.records.empty())
      dpmot::io::write_embeddings((dir / "det" / "embeddings.dpem").string(),
                                  ef);
  }
  std::cout << "wrote " << dir.string() << " (" << rendered.info.n_frames
            << " frames, " << sc.agents.size() << " agents)\n";
  return 0;
}

struct SodeArgs {
  std::vector<std::string> seq_dirs;
  std::string out_dir{"dpmot_sode"};
  std::string calib;
  double min_accuracy{-1.0};
  double lambda_q{0.0};
  bool moving{false};
  bool moving_set{false};
  long seed{0};
};

int cmd_sode_check(const SodeArgs& a) {
  fs::create_directories(a.out_dir);
  double total_len = 0.0, total_weighted = 0.0;
  for (const auto& dir_str : a.seq_dirs) {
    SeqData s = load_sequence(dir_str, a.calib, true, false);
    if (s.truth_orders.empty())
      throw dpmot::Error("missing truth file " +
                         (s.dir / "gt" / "depth_order.csv").string());
    dpmot::sode::OrderingParams params;
    if (a.lambda_q > 0) params.lambda_q = a.lambda_q;
    params.moving_camera = a.moving_set ? a.moving : false;

    std::ofstream csv(fs::path(a.out_dir) / (s.name + ".sode.csv"));
    csv << "frame,accuracy,order\n";
    for (const auto& [frame, truth] : s.truth_orders) {
      auto it = s.dets.find(frame);
      std::vector<dpmot::Detection> dets =
          it == s.dets.end() ? std::vector<dpmot::Detection>{} : it->second;
      const auto est = dpmot::sode::order_detections(dets, s.cam, params);
      double acc = 0.0;
      try {
        acc = dpmot::metrics::lcs_accuracy(truth, est);
      } catch (const dpmot::MismatchedIndexSets& e) {
        throw dpmot::MismatchedIndexSets(s.name + " frame " +
                                         std::to_string(frame) + ": " + e.what());
      }
      total_len += static_cast<double>(truth.size());
      total_weighted += acc * static_cast<double>(truth.size());
      csv << frame << ',' << pct(acc / 100.0);
      for (std::size_t k = 0; k < est.size(); ++k)
        csv << (k == 0 ? ",\"" : " ") << est[k];
      if (!est.empty()) csv << '"';
      csv << '\n';
    }
  }
  const double aggregate = total_len > 0 ? total_weighted / total_len : 100.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", aggregate);
  std::cout << "aggregate LCS accuracy: " << buf << "%\n";
  if (a.min_accuracy >= 0 && aggregate < a.min_accuracy) {
    std::cerr << "accuracy below required " << a.min_accuracy << "%\n";
    return 1;
  }
  return 0;
}

struct AblateArgs {
  std::vector<std::string> seq_dirs;
  std::string out_dir{"dpmot_ablation"};
  ConfigFlags flags;
  int workers{0};
  long seed{0};
};

int cmd_ablate(const AblateArgs& a) {
  static const std::pair<dpmot::MotionModel, dpmot::AssociationMode> grid[] = {
      {dpmot::MotionModel::Kf2d, dpmot::AssociationMode::FirstOrder},
      {dpmot::MotionModel::Kf2d, dpmot::AssociationMode::HighOrder},
      {dpmot::MotionModel::Kf3d, dpmot::AssociationMode::FirstOrder},
      {dpmot::MotionModel::Kf3d, dpmot::AssociationMode::HighOrder},
      {dpmot::MotionModel::ActiveKf2d, dpmot::AssociationMode::FirstOrder},
      {dpmot::MotionModel::ActiveKf2d, dpmot::AssociationMode::HighOrder},
      {dpmot::MotionModel::ActiveKf3d, dpmot::AssociationMode::FirstOrder},
      {dpmot::MotionModel::ActiveKf3d, dpmot::AssociationMode::HighOrder},
  };

  std::vector<SeqData> seqs(a.seq_dirs.size());
  parallel_for(a.seq_dirs.size(), a.workers, [&](std::size_t i) {
    seqs[i] = load_sequence(a.seq_dirs[i], "", true, true);
  });

  const dpmot::TrackerConfig base = a.flags.build();
  struct Cell {
    double fn = 0, fp = 0, idsw = 0, gt = 0, hyp = 0, idtp2 = 0;
    int mt = 0, ml = 0;
  };
  std::vector<Cell> cells(8);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t g = 0; g < 8; ++g)
    for (std::size_t i = 0; i < seqs.size(); ++i) jobs.emplace_back(g, i);
  std::mutex mu;
  parallel_for(jobs.size(), a.workers, [&](std::size_t j) {
    const auto [g, i] = jobs[j];
    dpmot::TrackerConfig cfg = base;
    cfg.motion = grid[g].first;
    cfg.association = grid[g].second;
    const auto result = dpmot::run_sequence(seqs[i].dets, cfg, seqs[i].cam);
    const auto rep = dpmot::metrics::clear_mot(seqs[i].gt, result.records);
    std::lock_guard<std::mutex> lock(mu);
    Cell& c = cells[g];
    c.fn += rep.false_negatives;
    c.fp += rep.false_positives;
    c.idsw += rep.id_switches;
    c.gt += rep.gt_count;
    c.hyp += static_cast<double>(result.records.size());
    c.idtp2 += rep.idf1 * (rep.gt_count + static_cast<double>(result.records.size()));
    c.mt += rep.mostly_tracked;
    c.ml += rep.mostly_lost;
  });

  std::ostringstream table;
  table << "motion,association,MOTA,IDF1,MT,ML,IDSw\n";
  for (std::size_t g = 0; g < 8; ++g) {
    const Cell& c = cells[g];
    const double mota = c.gt > 0 ? 1.0 - (c.fn + c.fp + c.idsw) / c.gt : 0.0;
    const double idf1 = (c.gt + c.hyp) > 0 ? c.idtp2 / (c.gt + c.hyp) : 1.0;
    table << to_string(grid[g].first) << ',' << to_string(grid[g].second) << ','
          << pct(mota) << ',' << pct(idf1) << ',' << c.mt << ',' << c.ml << ','
          << static_cast<long>(c.idsw) << '\n';
  }
  std::cout << table.str();
  fs::create_directories(a.out_dir);
  std::ofstream out(fs::path(a.out_dir) / "ablation.csv");
  out << table.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpmot: depth-ordered multi-object tracking"};
  app.require_subcommand(1);

  TrackArgs ta;
  auto* track = app.add_subcommand("track", "run the tracker on sequences");
  track->add_option("seq_dirs", ta.seq_dirs, "sequence directories")->required();
  track->add_option("--out,-o", ta.out_dir, "output directory");
  track->add_option("--calib", ta.calib, "camera calibration file override");
  track->add_option("--flow-file", ta.flow_file, "motion-delta file override");
  track->add_option("--seed", ta.seed, "rng seed (runs are deterministic)");
  track->add_flag("--overlay", ta.overlay, "write per-frame SVG overlays");
  track->add_flag("--dump-cost-matrices", ta.dump_cost,
                  "write per-frame cost matrices as CSV");
  track->add_option("--workers", ta.workers, "parallel sequences (default: cores)");
  add_config_flags(track, ta.flags);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate track files against ground truth");
  eval->add_option("seq_dirs", ea.seq_dirs, "sequence directories with gt")->required();
  eval->add_option("--tracks,-t", ea.tracks_dir, "directory of <seq>.txt track files")
      ->required();
  eval->add_option("--csv", ea.csv_path, "also write the table to this CSV");
  eval->add_option("--min-mota", ea.min_mota, "exit 1 when overall MOTA is below this percentage");
  eval->add_option("--iou-threshold", ea.iou, "match threshold (default 0.5)");
  eval->add_option("--workers", ea.workers, "parallel sequences");
  eval->add_option("--seed", ea.seed, "rng seed (unused, runs are deterministic)");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "render a synthetic MOT sequence");
  synth->add_option("scenario", sa.scenario_path, "scenario description file");
  synth->add_option("--preset", sa.preset,
                    "built-in scenario: static|ego|bounce|merged|parallel");
  synth->add_option("--out,-o", sa.out_dir, "output directory");
  synth->add_option("--name", sa.name, "override sequence name");
  auto* seed_opt = synth->add_option("--seed", sa.seed, "scenario seed");
  synth->add_option("--agents", sa.agents, "agent count (static/ego/parallel)");
  synth->add_option("--frames", sa.frames, "frame count (parallel)");
  synth->add_option("--pitch-deg", sa.pitch_deg, "camera pitch (static)");
  synth->add_option("--z-min", sa.z_min, "nearest depth (static)");
  synth->add_option("--z-max", sa.z_max, "farthest depth (static)");
  synth->add_option("--min-sep", sa.min_sep, "depth separation (static)");
  synth->add_option("--det-noise", sa.det_noise, "box edge noise sigma (static)");

  SodeArgs da;
  auto* sode = app.add_subcommand("sode-check",
                                  "score depth ordering against truth files");
  sode->add_option("seq_dirs", da.seq_dirs, "sequence directories")->required();
  sode->add_option("--out,-o", da.out_dir, "per-frame CSV output directory");
  sode->add_option("--calib", da.calib, "camera calibration file override");
  sode->add_option("--min-accuracy", da.min_accuracy,
                   "exit 1 when aggregate LCS accuracy (percent) is lower");
  sode->add_option("--depth-bins-scale,--lambda-q,--lambda_q", da.lambda_q,
                   "quantization bins scale");
  auto* mv = sode->add_flag("--moving-camera,--moving_camera", da.moving,
                            "use the moving-camera depth path");
  sode->add_option("--seed", da.seed, "rng seed (unused, runs are deterministic)");

  AblateArgs aa;
  auto* ablate = app.add_subcommand(
      "ablate", "run all motion/association configurations and tabulate");
  ablate->add_option("seq_dirs", aa.seq_dirs, "sequence directories with gt")
      ->required();
  ablate->add_option("--out,-o", aa.out_dir, "output directory for ablation.csv");
  ablate->add_option("--workers", aa.workers, "parallel jobs (default: cores)");
  ablate->add_option("--seed", aa.seed, "rng seed (unused, runs are deterministic)");
  add_config_flags(ablate, aa.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  sa.seed_set = seed_opt->count() > 0;
  da.moving_set = mv->count() > 0;
  ta.workers = ta.workers > 0 ? ta.workers : std::thread::hardware_concurrency();
  ea.workers = ea.workers > 0 ? ea.workers : std::thread::hardware_concurrency();
  aa.workers = aa.workers > 0 ? aa.workers : std::thread::hardware_concurrency();

  try {
    if (track->parsed()) return cmd_track(ta);
    if (eval->parsed()) return cmd_eval(ea);
    if (synth->parsed()) return cmd_synth(sa);
    if (sode->parsed()) return cmd_sode_check(da);
    if (ablate->parsed()) return cmd_ablate(aa);
  } catch (const dpmot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
