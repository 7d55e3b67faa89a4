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

#ifndef ACTIONMAP_LOCALIZATION_H_
#define ACTIONMAP_LOCALIZATION_H_

#include <vector>

#include <Eigen/Dense>

#include "actionmap/scene_model.h"

namespace actionmap {

struct LocalizationQuery {
  std::vector<int> activities;
  std::vector<double> confidences;  // optional, one per activity
  std::vector<Cell> true_cells;     // one per activity
  int k_max = 1;

  void validate() const;
};

struct DiscrepancyCurve {
  int k_max = 0;
  std::vector<int> activities;
  // per_activity[i][k - 1]: mean discrepancy of activities[i] at K = k.
  std::vector<std::vector<double>> per_activity;
  std::vector<double> aggregate;  // over all query steps
};

// Cells of one scene map (rows in row-major cell order) by descending score
// for `activity`; ties keep row-major order.
std::vector<Cell> rank_locations(const Eigen::MatrixXd& scene_map, int width,
                                 int activity);

// Smallest K at which the curve drops below `threshold`, or 0 if never.
int first_k_below(const std::vector<double>& curve, double threshold);

struct LocalizationOptions {
  // Multiplies the maps of consecutive activities before ranking.
  bool fuse_sequence = false;
};

// Discrepancy of a step at K: the distance in cells from its true cell to
// the nearest of the top-K ranked cells.
DiscrepancyCurve discrepancy_curve(const Eigen::MatrixXd& scene_map, int width,
                                   const std::vector<LocalizationQuery>& queries,
                                   int k_max,
                                   const LocalizationOptions& options = {});

// One single-step query per labelled cell of each activity present in
// `grid`, using the scene's ground truth.
std::vector<LocalizationQuery> label_queries(const SceneGrid& grid, int k_max);

}  // namespace actionmap

#endif  // ACTIONMAP_LOCALIZATION_H_
