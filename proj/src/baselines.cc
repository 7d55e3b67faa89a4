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

#include "actionmap/baselines.h"

#include <algorithm>
#include <iostream>

#include "actionmap/error.h"

namespace actionmap {

CategoryActivityMap::CategoryActivityMap(int category_count, int activity_count)
    : activity_count_(activity_count), map_(category_count) {
  if (category_count < 0 || activity_count < 0) {
    throw Error("category map dimensions must be non-negative");
  }
}

void CategoryActivityMap::add(int category, int activity) {
  if (category < 0 || category >= category_count()) {
    throw Error("category index " + std::to_string(category) + " out of range");
  }
  if (activity < 0 || activity >= activity_count_) {
    throw Error("activity index " + std::to_string(activity) + " out of range");
  }
  auto& list = map_[category];
  auto it = std::lower_bound(list.begin(), list.end(), activity);
  if (it == list.end() || *it != activity) list.insert(it, activity);
}

const std::vector<int>& CategoryActivityMap::activities_for(int category) const {
  return map_.at(category);
}

bool CategoryActivityMap::empty() const {
  return std::all_of(map_.begin(), map_.end(),
                     [](const std::vector<int>& l) { return l.empty(); });
}

Eigen::MatrixXd detection_action_map(const Eigen::MatrixXd& object_scores,
                                     const CategoryActivityMap& mapping,
                                     bool normalize) {
  if (object_scores.cols() != mapping.category_count()) {
    throw Error("object scores and category map disagree on F");
  }
  if (mapping.empty()) {
    std::cerr << "warning: category map associates no category with any "
                 "activity; detection map is all zero\n";
  }
  Eigen::MatrixXd map =
      Eigen::MatrixXd::Zero(object_scores.rows(), mapping.activity_count());
  for (int f = 0; f < mapping.category_count(); ++f) {
    for (int a : mapping.activities_for(f)) {
      map.col(a) = map.col(a).cwiseMax(object_scores.col(f));
    }
  }
  return normalize ? normalize_columns(map) : map;
}

Eigen::MatrixXd augmented_wnmf(const ActionMatrixBundle& bundle,
                               const Eigen::MatrixXd& scene_scores,
                               const Eigen::MatrixXd& object_scores,
                               const std::vector<bool>& camera_observed,
                               const SolverParams& params) {
  const int m = bundle.rows();
  const int a = bundle.cols();
  if (scene_scores.rows() != m || object_scores.rows() != m ||
      static_cast<int>(camera_observed.size()) != m) {
    throw Error("augmented NMF inputs disagree on the number of rows");
  }
  if (!scene_scores.allFinite() || !object_scores.allFinite() ||
      (scene_scores.array() < 0.0).any() || (object_scores.array() < 0.0).any()) {
    throw Error("augmented NMF features must be finite and non-negative");
  }
  const Eigen::Index features = scene_scores.cols() + object_scores.cols();

  ActionMatrixBundle augmented;
  augmented.observed.resize(m, a + features);
  augmented.observed << bundle.observed, normalize_columns(scene_scores),
      normalize_columns(object_scores);
  augmented.weights = Eigen::MatrixXd::Zero(m, a + features);
  augmented.weights.leftCols(a) = bundle.weights;
  augmented.mask.setConstant(m, a + features, false);
  augmented.mask.leftCols(a) = bundle.mask;
  for (Eigen::Index c = a; c < a + features; ++c) {
    if (augmented.observed.col(c).maxCoeff() <= 0.0) continue;
    for (int i = 0; i < m; ++i) {
      if (!camera_observed[i]) continue;
      augmented.weights(i, c) = 1.0;
      augmented.mask(i, c) = true;
    }
  }

  SolverParams plain = params;
  plain.lambda = 0.0;
  plain.mu = 0.0;
  const FitResult result =
      fit(augmented, GramMatrix::identity(m),
          GramMatrix::identity(static_cast<int>(a + features)), plain);
  return normalize_columns(predict(result.factors).leftCols(a));
}

}  // namespace actionmap
