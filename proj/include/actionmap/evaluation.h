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

#ifndef ACTIONMAP_EVALUATION_H_
#define ACTIONMAP_EVALUATION_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "actionmap/scene_model.h"

namespace actionmap {

// Isosceles wedge in front of a camera: both legs have length range_cells
// and enclose fov_deg.
struct ViewTriangle {
  Eigen::Vector2d apex = Eigen::Vector2d::Zero();
  Eigen::Vector2d heading = Eigen::Vector2d::UnitX();
  double fov_deg = 60.0;
  double range_cells = 6.0;

  void validate() const;
};

struct ViewParams {
  double fov_deg = 60.0;
  double range_cells = 6.0;
};

ViewTriangle view_triangle(const ViewPose& pose, const ViewParams& params);

// Cells whose centers lie inside the (closed) triangle, row-major order.
std::vector<Cell> cells_in_triangle(const ViewTriangle& tri, int width,
                                    int height);

// Mean Action Map row over the triangle's cells; zero if it sees none.
// `scene_map` holds one row per cell of `grid`.
Eigen::VectorXd image_scores(const Eigen::MatrixXd& scene_map,
                             const ViewTriangle& tri, const SceneGrid& grid);
// Activity a is present iff some triangle cell carries label a.
std::vector<bool> image_gt(const SceneGrid& grid, const ViewTriangle& tri);

struct F1Sweep {
  double max_f1 = 0.0;
  double mean_f1 = 0.0;
  std::vector<double> f1;  // one per threshold k / (n + 1), k = 1..n
};

double f1_score(int true_positive, int false_positive, int false_negative);

// Thresholds t_k = k / (n + 1); an image is predicted positive when its
// score is >= t_k.
F1Sweep f1_sweep(std::span<const double> scores, const std::vector<bool>& gt,
                 int thresholds = 100);

// Summary columns in the order W. Max F1, W. Mean F1, Max F1, Mean F1.
struct SummaryMetrics {
  double weighted_max_f1 = 0.0;
  double weighted_mean_f1 = 0.0;
  double max_f1 = 0.0;
  double mean_f1 = 0.0;

  std::vector<double> as_vector() const {
    return {weighted_max_f1, weighted_mean_f1, max_f1, mean_f1};
  }
  static SummaryMetrics from_vector(const std::vector<double>& v);
};

inline constexpr const char* kSummaryColumns[] = {"W. Max F1", "W. Mean F1",
                                                  "Max F1", "Mean F1"};

// Sum_a (count_a / sum counts) * value_a.
double weighted_average(std::span<const double> values,
                        std::span<const int> counts);

SummaryMetrics aggregate(const std::vector<double>& max_f1,
                         const std::vector<double>& mean_f1,
                         const std::vector<int>& gt_counts);

struct EvalResult {
  std::vector<double> max_f1;   // per activity
  std::vector<double> mean_f1;  // per activity
  std::vector<int> gt_counts;   // images with the activity present
  int image_count = 0;
  SummaryMetrics summary;
};

// Scores every camera pose of the listed scenes as one pooled image set.
// `normalized_map` covers the rows of `index`, values in [0, 1].
EvalResult evaluate_action_map(const Eigen::MatrixXd& normalized_map,
                               const GlobalIndex& index,
                               const std::vector<Scene>& scenes,
                               const std::vector<int>& eval_scenes,
                               const ViewParams& view = {});

}  // namespace actionmap

#endif  // ACTIONMAP_EVALUATION_H_
