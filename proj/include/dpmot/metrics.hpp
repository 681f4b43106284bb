// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <vector>

#include "dpmot/types.hpp"

namespace dpmot::metrics {

struct MotReport {
  double mota{0.0};
  double idf1{0.0};
  int mostly_tracked{0};   // >= 80% of the truth span covered
  int mostly_lost{0};      // <= 20%
  int id_switches{0};
  int fragments{0};
  int false_positives{0};
  int false_negatives{0};
  int gt_count{0};         // truth boxes considered
  int gt_tracks{0};
};

// Frame-by-frame matching on IoU with sticky prior correspondences: a pair
// matched last frame stays matched while its overlap holds, the remainder is
// solved per frame with the assignment solver. Throws EmptyGroundTruth.
MotReport clear_mot(const std::vector<TrackRecord>& gt,
                    const std::vector<TrackRecord>& hyp,
                    double iou_threshold = 0.5);

// Identity-level F1: one global bipartite match between truth and hypothesis
// ids maximizing per-id frame overlap.
double idf1(const std::vector<TrackRecord>& gt,
            const std::vector<TrackRecord>& hyp, double iou_threshold = 0.5);

// 100 * LCS(truth, estimate) / |truth|. Both must be permutations of the
// same index set; throws MismatchedIndexSets otherwise. Empty inputs = 100.
double lcs_accuracy(const std::vector<int>& truth, const std::vector<int>& est);

}  // namespace dpmot::metrics
