// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 dpmot contributors
#include "dpmot/assign.hpp"

#include <algorithm>
#include <limits>

namespace dpmot::assign {

Assignment solve(const MatX& cost, double sentinel) {
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());
  Assignment out;
  if (nr == 0 || nc == 0) {
    for (int i = 0; i < nr; ++i) out.unmatched_tracks.push_back(i);
    for (int j = 0; j < nc; ++j) out.unmatched_dets.push_back(j);
    return out;
  }

  const int n = std::max(nr, nc);
  const double inf = std::numeric_limits<double>::infinity();
  auto at = [&](int i, int j) -> double {
    return (i < nr && j < nc) ? cost(i, j) : sentinel;
  };

  // row/column potentials; p[j] = row matched to column j, 1-based, 0 = free
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    // augment along the found path
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_of_col(nc, -1);
  for (int j = 1; j <= n; ++j) {
    const int i = p[j];
    if (i >= 1 && i <= nr && j <= nc) row_of_col[j - 1] = i - 1;
  }

  std::vector<char> row_matched(nr, 0), col_matched(nc, 0);
  for (int j = 0; j < nc; ++j) {
    const int i = row_of_col[j];
    if (i < 0) continue;
    if (cost(i, j) >= sentinel) continue;  // forced onto a gated/padded entry
    out.matches.push_back({i, j, cost(i, j)});
    row_matched[i] = 1;
    col_matched[j] = 1;
  }
  std::sort(out.matches.begin(), out.matches.end(),
            [](const Assignment::Match& a, const Assignment::Match& b) {
              return a.track < b.track;
            });
  for (int i = 0; i < nr; ++i)
    if (!row_matched[i]) out.unmatched_tracks.push_back(i);
  for (int j = 0; j < nc; ++j)
    if (!col_matched[j]) out.unmatched_dets.push_back(j);
  return out;
}

}  // namespace dpmot::assign
