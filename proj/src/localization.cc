// Copyright 2026 The Actionmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "actionmap/localization.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "actionmap/error.h"

namespace actionmap {
namespace {

std::vector<int> rank_rows(const Eigen::VectorXd& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

Eigen::VectorXd step_scores(const Eigen::MatrixXd& map,
                            const LocalizationQuery& q, size_t step,
                            bool fuse) {
  Eigen::VectorXd s = map.col(q.activities[step]);
  if (!q.confidences.empty()) s *= q.confidences[step];
  if (fuse && step > 0) {
    Eigen::VectorXd prev = map.col(q.activities[step - 1]);
    if (!q.confidences.empty()) prev *= q.confidences[step - 1];
    s = s.cwiseProduct(prev);
  }
  return s;
}

}  // namespace

void LocalizationQuery::validate() const {
  if (activities.empty()) throw Error("localization query has no activities");
  if (true_cells.size() != activities.size()) {
    throw Error("localization query needs one true cell per activity");
  }
  if (!confidences.empty() && confidences.size() != activities.size()) {
    throw Error("localization query confidences do not match its activities");
  }
  if (k_max < 1) throw Error("localization K_max must be >= 1");
}

std::vector<Cell> rank_locations(const Eigen::MatrixXd& scene_map, int width,
                                 int activity) {
  if (activity < 0 || activity >= scene_map.cols()) {
    throw Error("activity index " + std::to_string(activity) +
                " out of range");
  }
  if (width <= 0 || scene_map.rows() % width != 0) {
    throw Error("map rows do not form a grid of the given width");
  }
  std::vector<Cell> cells;
  for (int row : rank_rows(scene_map.col(activity))) {
    cells.push_back({row % width, row / width});
  }
  return cells;
}

int first_k_below(const std::vector<double>& curve, double threshold) {
  for (size_t k = 0; k < curve.size(); ++k) {
    if (curve[k] < threshold) return static_cast<int>(k) + 1;
  }
  return 0;
}

DiscrepancyCurve discrepancy_curve(const Eigen::MatrixXd& scene_map, int width,
                                   const std::vector<LocalizationQuery>& queries,
                                   int k_max,
                                   const LocalizationOptions& options) {
  if (queries.empty()) throw Error("discrepancy curve needs queries");
  if (k_max < 1) throw Error("localization K_max must be >= 1");
  if (width <= 0 || scene_map.rows() % width != 0) {
    throw Error("map rows do not form a grid of the given width");
  }
  const int cells = static_cast<int>(scene_map.rows());
  const int height = cells / width;
  k_max = std::min(k_max, cells);

  std::map<int, std::vector<double>> sums;
  std::map<int, int> counts;
  std::vector<double> total(k_max, 0.0);
  int steps = 0;
  // Canonical query order keeps the floating-point sums independent of the
  // order the caller supplied.
  std::vector<const LocalizationQuery*> ordered;
  for (const LocalizationQuery& q : queries) ordered.push_back(&q);
  auto key = [](const LocalizationQuery* q) {
    return std::tie(q->activities, q->true_cells, q->confidences);
  };
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const LocalizationQuery* a, const LocalizationQuery* b) {
                     return key(a) < key(b);
                   });
  for (const LocalizationQuery* query : ordered) {
    const LocalizationQuery& q = *query;
    q.validate();
    for (size_t step = 0; step < q.activities.size(); ++step) {
      const int a = q.activities[step];
      if (a < 0 || a >= scene_map.cols()) {
        throw Error("activity index " + std::to_string(a) + " out of range");
      }
      const Cell truth = q.true_cells[step];
      if (truth.x < 0 || truth.y < 0 || truth.x >= width ||
          truth.y >= height) {
        throw Error("query cell outside the map");
      }
      const std::vector<int> order =
          rank_rows(step_scores(scene_map, q, step, options.fuse_sequence));
      auto& sum = sums[a];
      sum.resize(k_max, 0.0);
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < k_max; ++k) {
        const int row = order[k];
        best = std::min(best, std::hypot(row % width - truth.x,
                                         row / width - truth.y));
        sum[k] += best;
        total[k] += best;
      }
      ++counts[a];
      ++steps;
    }
  }

  DiscrepancyCurve curve;
  curve.k_max = k_max;
  for (auto& [a, sum] : sums) {
    for (double& v : sum) v /= counts[a];
    curve.activities.push_back(a);
    curve.per_activity.push_back(sum);
  }
  for (double& v : total) v /= steps;
  curve.aggregate = total;
  return curve;
}

std::vector<LocalizationQuery> label_queries(const SceneGrid& grid,
                                             int k_max) {
  std::vector<LocalizationQuery> queries;
  for (int a = 0; a < grid.activity_count(); ++a) {
    for (int i = 0; i < grid.cell_count(); ++i) {
      const Cell c = grid.cell_at(i);
      if (!grid.has_label(c, a)) continue;
      LocalizationQuery q;
      q.activities = {a};
      q.true_cells = {c};
      q.k_max = k_max;
      queries.push_back(q);
    }
  }
  return queries;
}

}  // namespace actionmap
