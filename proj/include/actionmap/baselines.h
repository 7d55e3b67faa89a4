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

#ifndef ACTIONMAP_BASELINES_H_
#define ACTIONMAP_BASELINES_H_

#include <vector>

#include <Eigen/Dense>

#include "actionmap/rwnmf.h"

namespace actionmap {

// Object category f -> activities it affords.
class CategoryActivityMap {
 public:
  CategoryActivityMap() = default;
  CategoryActivityMap(int category_count, int activity_count);

  int category_count() const { return static_cast<int>(map_.size()); }
  int activity_count() const { return activity_count_; }
  void add(int category, int activity);
  const std::vector<int>& activities_for(int category) const;
  bool empty() const;

  bool operator==(const CategoryActivityMap&) const = default;

 private:
  int activity_count_ = 0;
  std::vector<std::vector<int>> map_;
};

// R_hat(m, a) = max over categories f mapped to a of o(m, f), then
// column-normalized unless `normalize` is false.
Eigen::MatrixXd detection_action_map(const Eigen::MatrixXd& object_scores,
                                     const CategoryActivityMap& mapping,
                                     bool normalize = true);

// Unregularized weighted NMF on [R | P | O]. Feature columns are max
// normalized and weighted 1 on camera-observed rows (0 elsewhere; all-zero
// columns get weight 0). Returns the normalized first A columns.
Eigen::MatrixXd augmented_wnmf(const ActionMatrixBundle& bundle,
                               const Eigen::MatrixXd& scene_scores,
                               const Eigen::MatrixXd& object_scores,
                               const std::vector<bool>& camera_observed,
                               const SolverParams& params);

}  // namespace actionmap

#endif  // ACTIONMAP_BASELINES_H_
