// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/io.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dpmot/errors.hpp"

namespace dpmot::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Line {
  int no;
  std::string text;
};

// non-blank lines with their 1-based numbers; '#' starts a comment
std::vector<Line> read_lines(const std::string& path, bool comments = false) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<Line> out;
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (comments) {
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
    }
    const std::string t = trim(raw);
    if (!t.empty()) out.push_back({no, t});
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

double to_double(const std::string& s, const std::string& path, int line) {
  if (s.empty()) throw ParseError(path, line, "empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError(path, line, "bad numeric field '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& path, int line) {
  if (s.empty()) throw ParseError(path, line, "empty integer field");
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ParseError(path, line, "bad integer field '" + s + "'");
  return static_cast<int>(v);
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot write " + path);
  return out;
}

BBox parse_box(const std::vector<std::string>& f, std::size_t first,
               const std::string& path, int line) {
  BBox b{to_double(f[first], path, line), to_double(f[first + 1], path, line),
         to_double(f[first + 2], path, line),
         to_double(f[first + 3], path, line)};
  if (b.w <= 0.0 || b.h <= 0.0)
    throw ParseError(path, line, "box width and height must be positive");
  return b;
}

// "key = value" or "key value"; returns false on a section header
bool split_kv(const std::string& text, std::string& key, std::string& value) {
  const auto eq = text.find('=');
  if (eq != std::string::npos) {
    key = trim(text.substr(0, eq));
    value = trim(text.substr(eq + 1));
    return !key.empty();
  }
  const auto sp = text.find_first_of(" \t");
  if (sp == std::string::npos) return false;
  key = trim(text.substr(0, sp));
  value = trim(text.substr(sp + 1));
  return true;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("bad boolean value '" + s + "'");
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& buf, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= std::uint32_t(static_cast<unsigned char>(buf[off + i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::string& buf, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= std::uint64_t(static_cast<unsigned char>(buf[off + i])) << (8 * i);
  return v;
}

}  // namespace

std::map<int, std::vector<Detection>> parse_detections(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw EmptyFile(path + ": no detection rows");
  std::map<int, std::vector<Detection>> out;
  for (const auto& ln : lines) {
    const auto f = split(ln.text, ',');
    if (f.size() != 10)
      throw ParseError(path, ln.no,
                       "expected 10 comma-separated fields, got " +
                           std::to_string(f.size()));
    Detection d;
    d.frame = to_int(f[0], path, ln.no);
    if (d.frame < 1) throw ParseError(path, ln.no, "frame must be >= 1");
    to_int(f[1], path, ln.no);  // id column, unused but must be numeric
    d.bbox = parse_box(f, 2, path, ln.no);
    d.confidence = to_double(f[6], path, ln.no);
    for (std::size_t k = 7; k < 10; ++k) to_double(f[k], path, ln.no);
    out[d.frame].push_back(std::move(d));
  }
  return out;
}

void write_detections(const std::string& path,
                      const std::map<int, std::vector<Detection>>& dets) {
  auto out = open_out(path);
  for (const auto& [frame, rows] : dets)
    for (const auto& d : rows)
      out << frame << ",-1," << fixed2(d.bbox.x) << ',' << fixed2(d.bbox.y)
          << ',' << fixed2(d.bbox.w) << ',' << fixed2(d.bbox.h) << ','
          << fixed2(d.confidence) << ",-1,-1,-1\n";
}

std::vector<GtRecord> parse_gt(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw EmptyFile(path + ": no ground-truth rows");
  std::vector<GtRecord> out;
  out.reserve(lines.size());
  for (const auto& ln : lines) {
    const auto f = split(ln.text, ',');
    if (f.size() != 9)
      throw ParseError(path, ln.no,
                       "expected 9 comma-separated fields, got " +
                           std::to_string(f.size()));
    GtRecord g;
    g.frame = to_int(f[0], path, ln.no);
    if (g.frame < 1) throw ParseError(path, ln.no, "frame must be >= 1");
    g.id = to_int(f[1], path, ln.no);
    g.bbox = parse_box(f, 2, path, ln.no);
    g.consider = to_int(f[6], path, ln.no);
    g.cls = to_int(f[7], path, ln.no);
    g.visibility = to_double(f[8], path, ln.no);
    out.push_back(g);
  }
  return out;
}

void write_gt(const std::string& path, const std::vector<GtRecord>& rows) {
  auto out = open_out(path);
  for (const auto& g : rows)
    out << g.frame << ',' << g.id << ',' << fixed2(g.bbox.x) << ','
        << fixed2(g.bbox.y) << ',' << fixed2(g.bbox.w) << ','
        << fixed2(g.bbox.h) << ',' << g.consider << ',' << g.cls << ','
        << fixed2(g.visibility) << '\n';
}

std::vector<TrackRecord> considered_records(const std::vector<GtRecord>& rows) {
  std::vector<TrackRecord> out;
  for (const auto& g : rows)
    if (g.consider == 1 && g.cls == 1)
      out.push_back({g.id, g.frame, g.bbox, 1.0});
  return out;
}

SequenceInfo parse_seqinfo(const std::string& path) {
  const auto lines = read_lines(path);
  SequenceInfo info;
  bool in_sequence = false;
  bool have_w = false, have_h = false;
  for (const auto& ln : lines) {
    if (ln.text.front() == '[') {
      in_sequence = (ln.text == "[Sequence]");
      continue;
    }
    if (!in_sequence) continue;
    std::string key, value;
    if (!split_kv(ln.text, key, value))
      throw ParseError(path, ln.no, "expected key=value");
    if (key == "name") {
      info.name = value;
    } else if (key == "imWidth") {
      info.img_w = to_int(value, path, ln.no);
      have_w = true;
    } else if (key == "imHeight") {
      info.img_h = to_int(value, path, ln.no);
      have_h = true;
    } else if (key == "frameRate") {
      info.frame_rate = to_double(value, path, ln.no);
    } else if (key == "seqLength") {
      info.n_frames = to_int(value, path, ln.no);
    } else if (key == "embeddingDim") {
      info.embedding_dim = to_int(value, path, ln.no);
    }
    // unknown keys (imDir, imExt, ...) are fine
  }
  if (!have_w) throw MissingField("imWidth");
  if (!have_h) throw MissingField("imHeight");
  return info;
}

void write_seqinfo(const std::string& path, const SequenceInfo& info) {
  auto out = open_out(path);
  out << "[Sequence]\n";
  out << "name=" << info.name << '\n';
  out << "imWidth=" << info.img_w << '\n';
  out << "imHeight=" << info.img_h << '\n';
  if (info.frame_rate == static_cast<int>(info.frame_rate))
    out << "frameRate=" << static_cast<int>(info.frame_rate) << '\n';
  else
    out << "frameRate=" << full_precision(info.frame_rate) << '\n';
  out << "seqLength=" << info.n_frames << '\n';
  if (info.embedding_dim > 0)
    out << "embeddingDim=" << info.embedding_dim << '\n';
}

EmbeddingFile read_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();

  if (buf.size() < 17) throw TruncatedFile(path + ": embedding header", buf.size());
  if (buf.compare(0, 4, "DPEM") != 0)
    throw BadMagic(path + ": bad magic '" + buf.substr(0, 4) + "'");
  EmbeddingFile file;
  file.version = static_cast<std::uint8_t>(buf[4]);
  file.dim = get_u32(buf, 5);
  if (file.dim < 1 || file.dim > 8192)
    throw DimMismatch(path + ": embedding dim " + std::to_string(file.dim) +
                      " outside [1, 8192]");
  const std::uint64_t count = get_u64(buf, 9);
  const std::size_t rec_size = 8 + 4 * std::size_t(file.dim);
  std::size_t off = 17;
  file.records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (buf.size() - off < rec_size)
      throw TruncatedFile(path + ": embedding record " + std::to_string(i),
                          off);
    EmbeddingRecord rec;
    rec.frame = get_u32(buf, off);
    rec.det_index = get_u32(buf, off + 4);
    rec.values.resize(file.dim);
    for (std::uint32_t k = 0; k < file.dim; ++k)
      rec.values[k] = std::bit_cast<float>(get_u32(buf, off + 8 + 4 * k));
    file.records.push_back(std::move(rec));
    off += rec_size;
  }
  if (off != buf.size())
    throw ParseError(path, 0, "trailing bytes after the last record");
  return file;
}

void write_embeddings(const std::string& path, const EmbeddingFile& file) {
  if (file.dim < 1 || file.dim > 8192)
    throw DimMismatch(path + ": embedding dim " + std::to_string(file.dim) +
                      " outside [1, 8192]");
  std::string buf;
  buf.reserve(17 + file.records.size() * (8 + 4 * std::size_t(file.dim)));
  buf += "DPEM";
  buf.push_back(char(file.version));
  put_u32(buf, file.dim);
  put_u64(buf, file.records.size());
  for (const auto& rec : file.records) {
    if (rec.values.size() != file.dim)
      throw DimMismatch(path + ": record has " +
                        std::to_string(rec.values.size()) +
                        " values, header says " + std::to_string(file.dim));
    put_u32(buf, rec.frame);
    put_u32(buf, rec.det_index);
    for (const float v : rec.values) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  }
  auto out = open_out(path, true);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void attach_embeddings(std::map<int, std::vector<Detection>>& dets,
                       const EmbeddingFile& file, int expected_dim) {
  if (expected_dim > 0 && file.dim != static_cast<std::uint32_t>(expected_dim))
    throw DimMismatch("embedding dim " + std::to_string(file.dim) +
                      " does not match configured " +
                      std::to_string(expected_dim));
  for (const auto& rec : file.records) {
    const auto it = dets.find(static_cast<int>(rec.frame));
    if (it == dets.end())
      throw Error("embedding references missing frame " +
                  std::to_string(rec.frame));
    if (rec.det_index >= it->second.size())
      throw Error("embedding det_index " + std::to_string(rec.det_index) +
                  " out of range in frame " + std::to_string(rec.frame));
    VecX e(file.dim);
    for (std::uint32_t k = 0; k < file.dim; ++k) e(k) = rec.values[k];
    it->second[rec.det_index].embedding = std::move(e);
  }
}

EmbeddingFile collect_embeddings(
    const std::map<int, std::vector<Detection>>& dets) {
  EmbeddingFile file;
  for (const auto& [frame, rows] : dets) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const VecX& e = rows[k].embedding;
      if (e.size() == 0) continue;
      if (file.dim == 0) file.dim = static_cast<std::uint32_t>(e.size());
      if (static_cast<std::uint32_t>(e.size()) != file.dim)
        throw DimMismatch("inconsistent embedding dims across detections");
      EmbeddingRecord rec;
      rec.frame = static_cast<std::uint32_t>(frame);
      rec.det_index = static_cast<std::uint32_t>(k);
      rec.values.resize(e.size());
      for (int i = 0; i < e.size(); ++i)
        rec.values[i] = static_cast<float>(e(i));
      file.records.push_back(std::move(rec));
    }
  }
  return file;
}

CameraModel parse_camera(const std::string& path, int img_w, int img_h) {
  CameraModel cam = CameraModel::defaults(img_w, img_h);
  for (const auto& ln : read_lines(path, true)) {
    std::string key, value;
    if (!split_kv(ln.text, key, value))
      throw ParseError(path, ln.no, "expected key value");
    const double v = to_double(value, path, ln.no);
    if (key == "f") cam.f = v;
    else if (key == "u_c") cam.u_c = v;
    else if (key == "v_c") cam.v_c = v;
    else if (key == "Y_c") cam.height = v;
    else if (key == "theta_x") cam.pitch = v;
    else if (key == "theta_y") cam.yaw = v;
    else if (key == "theta_z") cam.roll = v;
    else throw ConfigError(path + ": unknown calibration key '" + key + "'");
  }
  return cam;
}

void write_camera(const std::string& path, const CameraModel& cam) {
  auto out = open_out(path);
  out << "f = " << full_precision(cam.f) << '\n';
  out << "u_c = " << full_precision(cam.u_c) << '\n';
  out << "v_c = " << full_precision(cam.v_c) << '\n';
  out << "Y_c = " << full_precision(cam.height) << '\n';
  out << "theta_x = " << full_precision(cam.pitch) << '\n';
  out << "theta_y = " << full_precision(cam.yaw) << '\n';
  out << "theta_z = " << full_precision(cam.roll) << '\n';
}

std::vector<TrackRecord> parse_tracks(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<TrackRecord> out;
  out.reserve(lines.size());
  for (const auto& ln : lines) {
    const auto f = split(ln.text, ',');
    if (f.size() != 10)
      throw ParseError(path, ln.no,
                       "expected 10 comma-separated fields, got " +
                           std::to_string(f.size()));
    TrackRecord r;
    r.frame = to_int(f[0], path, ln.no);
    r.id = to_int(f[1], path, ln.no);
    r.bbox = parse_box(f, 2, path, ln.no);
    r.confidence = to_double(f[6], path, ln.no);
    out.push_back(r);
  }
  return out;
}

void write_tracks(const std::string& path, std::vector<TrackRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const TrackRecord& a, const TrackRecord& b) {
              if (a.frame != b.frame) return a.frame < b.frame;
              return a.id < b.id;
            });
  auto out = open_out(path);
  for (const auto& r : records)
    out << r.frame << ',' << r.id << ',' << fixed2(r.bbox.x) << ','
        << fixed2(r.bbox.y) << ',' << fixed2(r.bbox.w) << ','
        << fixed2(r.bbox.h) << ',' << fixed2(r.confidence) << ",-1,-1,-1\n";
}

std::map<int, std::vector<int>> parse_order_csv(const std::string& path) {
  std::map<int, std::vector<int>> out;
  for (const auto& ln : read_lines(path)) {
    const auto f = split(ln.text, ',');
    const int frame = to_int(f[0], path, ln.no);
    if (out.count(frame))
      throw ParseError(path, ln.no,
                       "duplicate frame " + std::to_string(frame));
    std::vector<int> order;
    order.reserve(f.size() - 1);
    for (std::size_t k = 1; k < f.size(); ++k)
      if (!f[k].empty()) order.push_back(to_int(f[k], path, ln.no));
    out.emplace(frame, std::move(order));
  }
  return out;
}

void write_order_csv(const std::string& path,
                     const std::map<int, std::vector<int>>& orders) {
  auto out = open_out(path);
  for (const auto& [frame, order] : orders) {
    out << frame;
    for (const int i : order) out << ',' << i;
    out << '\n';
  }
}

void apply_config_entry(TrackerConfig& cfg, const std::string& key_in,
                        const std::string& value) {
  std::string key = key_in;
  std::replace(key.begin(), key.end(), '-', '_');
  try {
    if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "beta") cfg.beta = std::stod(value);
    else if (key == "tau_z") cfg.tau_z = std::stod(value);
    else if (key == "tau_z_pixels") cfg.tau_z_pixels = to_bool(value);
    else if (key == "tau_gate") cfg.tau_gate = std::stod(value);
    else if (key == "tau_c") cfg.tau_c = std::stod(value);
    else if (key == "min_hits") cfg.min_hits = std::stoi(value);
    else if (key == "max_age") cfg.max_age = std::stoi(value);
    else if (key == "sigma") cfg.sigma = std::stod(value);
    else if (key == "w_z" || key == "depth_unit_weight") cfg.w_z = std::stod(value);
    else if (key == "lambda_q" || key == "depth_bins_scale") cfg.lambda_q = std::stod(value);
    else if (key == "conf_threshold") cfg.conf_threshold = std::stod(value);
    else if (key == "appearance_momentum") cfg.appearance_momentum = std::stod(value);
    else if (key == "s_d") cfg.s_d = std::stod(value);
    else if (key == "s_a") cfg.s_a = std::stod(value);
    else if (key == "motion") cfg.motion = motion_model_from_string(value);
    else if (key == "association") cfg.association = association_from_string(value);
    else if (key == "moving_camera") cfg.moving_camera = to_bool(value);
    else if (key == "motion_provider") {
      if (value != "history" && value != "flow-file")
        throw ConfigError("motion_provider must be 'history' or 'flow-file'");
      cfg.motion_provider = value;
    } else if (key == "weights_preset") {
      if (value == "main") {
        cfg.alpha = 0.6;
        cfg.beta = 0.4;
      } else if (value == "appendix") {
        cfg.alpha = 0.45;
        cfg.beta = 0.55;
      } else {
        throw ConfigError("weights_preset must be 'main' or 'appendix'");
      }
    } else {
      throw ConfigError("unknown config key '" + key_in + "'");
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad value '" + value + "' for config key '" + key_in + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("bad value '" + value + "' for config key '" + key_in + "'");
  }
}

TrackerConfig parse_config(const std::string& path) {
  TrackerConfig cfg;
  for (const auto& ln : read_lines(path, true)) {
    std::string key, value;
    if (!split_kv(ln.text, key, value))
      throw ParseError(path, ln.no, "expected key = value");
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(ln.no) + ": " + e.what());
    }
  }
  return cfg;
}

std::map<std::pair<int, int>, kalman::MotionDeltas> parse_flow(
    const std::string& path) {
  std::map<std::pair<int, int>, kalman::MotionDeltas> out;
  for (const auto& ln : read_lines(path)) {
    const auto f = split(ln.text, ',');
    if (f.size() != 6)
      throw ParseError(path, ln.no,
                       "expected 6 comma-separated fields, got " +
                           std::to_string(f.size()));
    const int frame = to_int(f[0], path, ln.no);
    const int det = to_int(f[1], path, ln.no);
    kalman::MotionDeltas d;
    d.prev = {to_double(f[2], path, ln.no), to_double(f[3], path, ln.no)};
    d.next = {to_double(f[4], path, ln.no), to_double(f[5], path, ln.no)};
    out[{frame, det}] = d;
  }
  return out;
}

namespace {

std::map<std::string, std::string> attrs(const std::vector<std::string>& toks,
                                         const std::string& path, int line) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos)
      throw ParseError(path, line, "expected key=value, got '" + toks[i] + "'");
    out[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  return out;
}

double attr_d(const std::map<std::string, std::string>& a,
              const std::string& key, double fallback, const std::string& path,
              int line) {
  const auto it = a.find(key);
  return it == a.end() ? fallback : to_double(it->second, path, line);
}

int attr_i(const std::map<std::string, std::string>& a, const std::string& key,
           int fallback, const std::string& path, int line) {
  const auto it = a.find(key);
  return it == a.end() ? fallback : to_int(it->second, path, line);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace

synth::Scenario parse_scenario(const std::string& path) {
  synth::Scenario s;
  int width = 960, height = 540;
  std::map<std::string, std::string> camera_attrs;
  int camera_line = 0;

  for (const auto& ln : read_lines(path, true)) {
    const auto toks = tokens(ln.text);
    const std::string& head = toks[0];
    if (head == "camera") {
      camera_attrs = attrs(toks, path, ln.no);
      camera_line = ln.no;
    } else if (head == "camera_waypoint") {
      const auto a = attrs(toks, path, ln.no);
      synth::Waypoint w;
      w.frame = attr_i(a, "frame", 1, path, ln.no);
      w.x = attr_d(a, "x", 0.0, path, ln.no);
      w.z = attr_d(a, "z", 0.0, path, ln.no);
      s.camera_path.push_back(w);
    } else if (head == "agent") {
      const auto a = attrs(toks, path, ln.no);
      synth::Agent ag;
      ag.id = attr_i(a, "id", static_cast<int>(s.agents.size()) + 1, path, ln.no);
      ag.height = attr_d(a, "height", 1.7, path, ln.no);
      ag.width = attr_d(a, "width", 0.5, path, ln.no);
      ag.appearance_seed =
          static_cast<unsigned>(attr_i(a, "seed", ag.id, path, ln.no));
      s.agents.push_back(ag);
    } else if (head == "waypoint") {
      const auto a = attrs(toks, path, ln.no);
      const int agent_id = attr_i(a, "agent", -1, path, ln.no);
      auto it = std::find_if(s.agents.begin(), s.agents.end(),
                             [&](const synth::Agent& ag) { return ag.id == agent_id; });
      if (it == s.agents.end())
        throw ParseError(path, ln.no,
                         "waypoint references unknown agent " +
                             std::to_string(agent_id));
      synth::Waypoint w;
      w.frame = attr_i(a, "frame", 1, path, ln.no);
      w.x = attr_d(a, "x", 0.0, path, ln.no);
      w.z = attr_d(a, "z", 0.0, path, ln.no);
      if (!it->waypoints.empty() && w.frame <= it->waypoints.back().frame)
        throw ParseError(path, ln.no, "waypoint frames must ascend");
      it->waypoints.push_back(w);
    } else if (head == "occlusion") {
      const auto a = attrs(toks, path, ln.no);
      synth::OcclusionEvent ev;
      ev.frame_begin = attr_i(a, "begin", 1, path, ln.no);
      ev.frame_end = attr_i(a, "end", ev.frame_begin, path, ln.no);
      ev.agent_a = attr_i(a, "a", 0, path, ln.no);
      ev.agent_b = attr_i(a, "b", 0, path, ln.no);
      const auto it = a.find("mode");
      const std::string mode = it == a.end() ? "merge_boxes" : it->second;
      if (mode == "merge_boxes") ev.mode = synth::OcclusionMode::MergeBoxes;
      else if (mode == "drop_far") ev.mode = synth::OcclusionMode::DropFar;
      else throw ParseError(path, ln.no, "occlusion mode must be merge_boxes or drop_far");
      s.occlusions.push_back(ev);
    } else {
      std::string key, value;
      if (!split_kv(ln.text, key, value))
        throw ParseError(path, ln.no, "expected key value");
      if (key == "name") s.name = value;
      else if (key == "frames") s.n_frames = to_int(value, path, ln.no);
      else if (key == "width") width = to_int(value, path, ln.no);
      else if (key == "height") height = to_int(value, path, ln.no);
      else if (key == "seed") s.seed = static_cast<unsigned>(to_int(value, path, ln.no));
      else if (key == "det_noise") s.det_noise = to_double(value, path, ln.no);
      else if (key == "embedding_dim") s.embedding_dim = to_int(value, path, ln.no);
      else if (key == "embedding_separation") s.embedding_separation = to_double(value, path, ln.no);
      else if (key == "embedding_noise") s.embedding_noise = to_double(value, path, ln.no);
      else if (key == "frame_rate") s.frame_rate = to_double(value, path, ln.no);
      else if (key == "moving") s.moving_camera = to_bool(value);
      else throw ParseError(path, ln.no, "unknown scenario key '" + key + "'");
    }
  }

  s.camera = CameraModel::defaults(width, height);
  if (!camera_attrs.empty()) {
    for (const auto& [k, v] : camera_attrs) {
      const double d = to_double(v, path, camera_line);
      if (k == "f") s.camera.f = d;
      else if (k == "u_c") s.camera.u_c = d;
      else if (k == "v_c") s.camera.v_c = d;
      else if (k == "height") s.camera.height = d;
      else if (k == "pitch") s.camera.pitch = d;
      else if (k == "yaw") s.camera.yaw = d;
      else if (k == "roll") s.camera.roll = d;
      else throw ParseError(path, camera_line, "unknown camera key '" + k + "'");
    }
  }
  if (s.agents.empty())
    throw ParseError(path, 0, "scenario has no agents");
  for (const auto& ag : s.agents)
    if (ag.waypoints.empty())
      throw ParseError(path, 0, "agent " + std::to_string(ag.id) + " has no waypoints");
  return s;
}

void write_scenario(const std::string& path, const synth::Scenario& s) {
  auto out = open_out(path);
  out << "name " << s.name << '\n';
  out << "frames " << s.n_frames << '\n';
  out << "width " << s.camera.img_w << '\n';
  out << "height " << s.camera.img_h << '\n';
  out << "seed " << s.seed << '\n';
  out << "det_noise " << full_precision(s.det_noise) << '\n';
  if (s.embedding_dim > 0) {
    out << "embedding_dim " << s.embedding_dim << '\n';
    out << "embedding_separation " << full_precision(s.embedding_separation) << '\n';
    out << "embedding_noise " << full_precision(s.embedding_noise) << '\n';
  }
  out << "frame_rate " << full_precision(s.frame_rate) << '\n';
  out << "camera f=" << full_precision(s.camera.f)
      << " u_c=" << full_precision(s.camera.u_c)
      << " v_c=" << full_precision(s.camera.v_c)
      << " height=" << full_precision(s.camera.height)
      << " pitch=" << full_precision(s.camera.pitch)
      << " yaw=" << full_precision(s.camera.yaw)
      << " roll=" << full_precision(s.camera.roll) << '\n';
  if (s.moving_camera) {
    out << "moving true\n";
    for (const auto& w : s.camera_path)
      out << "camera_waypoint frame=" << w.frame << " x=" << full_precision(w.x)
          << " z=" << full_precision(w.z) << '\n';
  }
  for (const auto& ag : s.agents) {
    out << "agent id=" << ag.id << " height=" << full_precision(ag.height)
        << " width=" << full_precision(ag.width) << " seed=" << ag.appearance_seed
        << '\n';
    for (const auto& w : ag.waypoints)
      out << "waypoint agent=" << ag.id << " frame=" << w.frame
          << " x=" << full_precision(w.x) << " z=" << full_precision(w.z) << '\n';
  }
  for (const auto& ev : s.occlusions)
    out << "occlusion begin=" << ev.frame_begin << " end=" << ev.frame_end
        << " a=" << ev.agent_a << " b=" << ev.agent_b << " mode="
        << (ev.mode == synth::OcclusionMode::MergeBoxes ? "merge_boxes" : "drop_far")
        << '\n';
}

}  // namespace dpmot::io
