// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dpmot/assign.hpp"
#include "dpmot/errors.hpp"

namespace dpmot::metrics {

namespace {

using FrameMap = std::map<int, std::vector<const TrackRecord*>>;

FrameMap by_frame(const std::vector<TrackRecord>& recs) {
  FrameMap m;
  for (const auto& r : recs) m[r.frame].push_back(&r);
  return m;
}

}  // namespace

MotReport clear_mot(const std::vector<TrackRecord>& gt,
                    const std::vector<TrackRecord>& hyp, double iou_threshold) {
  if (gt.empty()) throw EmptyGroundTruth("no ground-truth boxes to evaluate");

  MotReport rep;
  rep.gt_count = static_cast<int>(gt.size());

  FrameMap gt_frames = by_frame(gt);
  FrameMap hyp_frames = by_frame(hyp);

  std::set<int> frames;
  for (const auto& kv : gt_frames) frames.insert(kv.first);
  for (const auto& kv : hyp_frames) frames.insert(kv.first);

  std::map<int, int> corr;        // gt id -> hyp id matched in the previous frame
  std::map<int, int> last_match;  // gt id -> most recent hyp id ever matched
  std::map<int, std::vector<char>> tracked;  // per gt id, per-frame flags
  std::map<int, int> frames_seen;

  for (int frame : frames) {
    const auto git = gt_frames.find(frame);
    const auto hit = hyp_frames.find(frame);
    const std::vector<const TrackRecord*> empty;
    const auto& g = git == gt_frames.end() ? empty : git->second;
    const auto& h = hit == hyp_frames.end() ? empty : hit->second;

    std::map<int, int> g_index, h_index;  // id -> position in this frame
    for (std::size_t i = 0; i < g.size(); ++i) g_index[g[i]->id] = static_cast<int>(i);
    for (std::size_t j = 0; j < h.size(); ++j) h_index[h[j]->id] = static_cast<int>(j);

    std::vector<char> g_used(g.size(), 0), h_used(h.size(), 0);
    std::map<int, int> new_corr;

    // sticky pass: keep last frame's pairs that still overlap
    for (const auto& [gid, hid] : corr) {
      auto gi = g_index.find(gid);
      auto hj = h_index.find(hid);
      if (gi == g_index.end() || hj == h_index.end()) continue;
      if (iou(g[gi->second]->bbox, h[hj->second]->bbox) >= iou_threshold) {
        new_corr[gid] = hid;
        g_used[gi->second] = 1;
        h_used[hj->second] = 1;
      }
    }

    // assignment over the remainder
    std::vector<int> g_rem, h_rem;
    for (std::size_t i = 0; i < g.size(); ++i) if (!g_used[i]) g_rem.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < h.size(); ++j) if (!h_used[j]) h_rem.push_back(static_cast<int>(j));
    if (!g_rem.empty() && !h_rem.empty()) {
      MatX cost(g_rem.size(), h_rem.size());
      for (std::size_t a = 0; a < g_rem.size(); ++a) {
        for (std::size_t b = 0; b < h_rem.size(); ++b) {
          const double v = iou(g[g_rem[a]]->bbox, h[h_rem[b]]->bbox);
          cost(a, b) = v >= iou_threshold ? 1.0 - v : assign::kSentinel;
        }
      }
      const auto sol = assign::solve(cost);
      for (const auto& m : sol.matches) {
        const int gi = g_rem[m.track];
        const int hj = h_rem[m.det];
        new_corr[g[gi]->id] = h[hj]->id;
        g_used[gi] = 1;
        h_used[hj] = 1;
      }
    }

    for (const auto& [gid, hid] : new_corr) {
      auto prev = last_match.find(gid);
      if (prev != last_match.end() && prev->second != hid) rep.id_switches++;
      last_match[gid] = hid;
    }

    for (std::size_t i = 0; i < g.size(); ++i) {
      const int gid = g[i]->id;
      frames_seen[gid]++;
      tracked[gid].push_back(g_used[i]);
      if (!g_used[i]) rep.false_negatives++;
    }
    for (std::size_t j = 0; j < h.size(); ++j)
      if (!h_used[j]) rep.false_positives++;

    corr = std::move(new_corr);
  }

  rep.gt_tracks = static_cast<int>(tracked.size());
  for (const auto& [gid, flags] : tracked) {
    const int seen = frames_seen[gid];
    int covered = 0;
    for (char c : flags) covered += c;
    const double ratio = seen > 0 ? double(covered) / seen : 0.0;
    if (ratio >= 0.8) rep.mostly_tracked++;
    if (ratio <= 0.2) rep.mostly_lost++;
    // fragments: tracked -> gap -> tracked transitions inside the span
    int i = 0;
    const int n = static_cast<int>(flags.size());
    while (i < n && !flags[i]) ++i;
    bool in_gap = false;
    for (; i < n; ++i) {
      if (!flags[i]) {
        in_gap = true;
      } else if (in_gap) {
        rep.fragments++;
        in_gap = false;
      }
    }
  }

  rep.mota = 1.0 - double(rep.false_negatives + rep.false_positives +
                          rep.id_switches) /
                       double(rep.gt_count);
  rep.idf1 = idf1(gt, hyp, iou_threshold);
  return rep;
}

double idf1(const std::vector<TrackRecord>& gt,
            const std::vector<TrackRecord>& hyp, double iou_threshold) {
  if (gt.empty() && hyp.empty()) return 1.0;
  if (gt.empty() || hyp.empty()) return 0.0;

  // per-frame presence keyed by id
  std::map<int, std::map<int, const TrackRecord*>> g_by_id_frame, h_by_id_frame;
  for (const auto& r : gt) g_by_id_frame[r.id][r.frame] = &r;
  for (const auto& r : hyp) h_by_id_frame[r.id][r.frame] = &r;

  std::vector<int> gids, hids;
  for (const auto& kv : g_by_id_frame) gids.push_back(kv.first);
  for (const auto& kv : h_by_id_frame) hids.push_back(kv.first);

  MatX overlap = MatX::Zero(gids.size(), hids.size());
  for (std::size_t a = 0; a < gids.size(); ++a) {
    const auto& gmap = g_by_id_frame[gids[a]];
    for (std::size_t b = 0; b < hids.size(); ++b) {
      const auto& hmap = h_by_id_frame[hids[b]];
      int n = 0;
      for (const auto& [frame, grec] : gmap) {
        auto it = hmap.find(frame);
        if (it != hmap.end() && iou(grec->bbox, it->second->bbox) >= iou_threshold)
          ++n;
      }
      overlap(a, b) = n;
    }
  }

  // maximize total overlap; negate and solve as min cost, zero padding
  MatX cost = -overlap;
  const auto sol = assign::solve(cost, 0.0);
  double idtp = 0.0;
  for (const auto& m : sol.matches) idtp += overlap(m.track, m.det);
  return 2.0 * idtp / double(gt.size() + hyp.size());
}

double lcs_accuracy(const std::vector<int>& truth, const std::vector<int>& est) {
  if (truth.empty() && est.empty()) return 100.0;
  std::multiset<int> a(truth.begin(), truth.end());
  std::multiset<int> b(est.begin(), est.end());
  if (a != b)
    throw MismatchedIndexSets("orderings are not permutations of the same set");

  const std::size_t n = truth.size();
  const std::size_t m = est.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = truth[i - 1] == est[j - 1]
                     ? dp[i - 1][j - 1] + 1
                     : std::max(dp[i - 1][j], dp[i][j - 1]);
  return 100.0 * dp[n][m] / double(n);
}

}  // namespace dpmot::metrics
