// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#pragma once

#include <vector>

#include "dpmot/types.hpp"

namespace dpmot::assign {

// Cost used for gated / padded entries; an optimal pairing that lands on it
// is demoted to unmatched.
inline constexpr double kSentinel = 1e9;

struct Assignment {
  struct Match {
    int track;  // row
    int det;    // column
    double cost;
  };
  std::vector<Match> matches;          // sorted by row
  std::vector<int> unmatched_tracks;   // ascending
  std::vector<int> unmatched_dets;     // ascending
};

// Exact minimum-cost one-to-one assignment (Kuhn-Munkres with potentials,
// O(n^3)). Rectangular inputs are padded square with the sentinel. Ties are
// broken deterministically: rows are inserted in index order and among
// equal-reduced-cost columns the smallest column index wins.
Assignment solve(const MatX& cost, double sentinel = kSentinel);

}  // namespace dpmot::assign
