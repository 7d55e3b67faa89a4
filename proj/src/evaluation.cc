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

#include "actionmap/evaluation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "actionmap/error.h"

namespace actionmap {
namespace {

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  return Eigen::Vector2d(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

double edge(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
            const Eigen::Vector2d& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

}  // namespace

void ViewTriangle::validate() const {
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
    throw Error("view triangle field of view must lie in (0, 180) degrees");
  }
  if (!(range_cells > 0.0)) throw Error("view triangle range must be positive");
  if (!(heading.norm() > 0.0)) throw Error("view triangle heading is zero");
}

ViewTriangle view_triangle(const ViewPose& pose, const ViewParams& params) {
  ViewTriangle tri{pose.position, pose.heading, params.fov_deg,
                   params.range_cells};
  tri.validate();
  return tri;
}

std::vector<Cell> cells_in_triangle(const ViewTriangle& tri, int width,
                                    int height) {
  tri.validate();
  const Eigen::Vector2d h = tri.heading.normalized();
  const double half = 0.5 * tri.fov_deg * std::numbers::pi / 180.0;
  const Eigen::Vector2d a = tri.apex;
  const Eigen::Vector2d b = a + tri.range_cells * rotate(h, half);
  const Eigen::Vector2d c = a + tri.range_cells * rotate(h, -half);

  const double min_x = std::min({a.x(), b.x(), c.x()});
  const double max_x = std::max({a.x(), b.x(), c.x()});
  const double min_y = std::min({a.y(), b.y(), c.y()});
  const double max_y = std::max({a.y(), b.y(), c.y()});
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(max_x - 0.5)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(max_y - 0.5)));

  // Counter-clockwise orientation: b is the left vertex.
  const double tol = 1e-12;
  std::vector<Cell> cells;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Eigen::Vector2d p(x + 0.5, y + 0.5);
      if (edge(a, c, p) >= -tol && edge(c, b, p) >= -tol &&
          edge(b, a, p) >= -tol) {
        cells.push_back({x, y});
      }
    }
  }
  return cells;
}

Eigen::VectorXd image_scores(const Eigen::MatrixXd& scene_map,
                             const ViewTriangle& tri, const SceneGrid& grid) {
  if (scene_map.rows() != grid.cell_count()) {
    throw Error("scene map rows do not match the grid");
  }
  const auto cells = cells_in_triangle(tri, grid.width(), grid.height());
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(scene_map.cols());
  if (cells.empty()) return scores;
  for (const Cell& cell : cells) {
    scores += scene_map.row(grid.index(cell)).transpose();
  }
  return scores / static_cast<double>(cells.size());
}

std::vector<bool> image_gt(const SceneGrid& grid, const ViewTriangle& tri) {
  std::vector<bool> gt(grid.activity_count(), false);
  for (const Cell& cell : cells_in_triangle(tri, grid.width(), grid.height())) {
    for (int a : grid.labels(cell)) gt[a] = true;
  }
  return gt;
}

double f1_score(int true_positive, int false_positive, int false_negative) {
  // 2PR / (P + R) written over the confusion counts; zero without hits.
  if (true_positive == 0) return 0.0;
  return 2.0 * true_positive /
         (2.0 * true_positive + false_positive + false_negative);
}

F1Sweep f1_sweep(std::span<const double> scores, const std::vector<bool>& gt,
                 int thresholds) {
  if (scores.empty()) throw Error("F1 sweep needs at least one image");
  if (scores.size() != gt.size()) throw Error("scores and labels differ in size");
  if (thresholds < 1) throw Error("F1 sweep needs at least one threshold");
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0 + 1e-12)) {
      throw Error("image scores must lie in [0, 1]");
    }
  }
  F1Sweep sweep;
  sweep.f1.reserve(thresholds);
  for (int k = 1; k <= thresholds; ++k) {
    const double t = static_cast<double>(k) / (thresholds + 1);
    int tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const bool predicted = scores[i] >= t;
      if (predicted && gt[i]) ++tp;
      if (predicted && !gt[i]) ++fp;
      if (!predicted && gt[i]) ++fn;
    }
    sweep.f1.push_back(f1_score(tp, fp, fn));
  }
  sweep.max_f1 = *std::max_element(sweep.f1.begin(), sweep.f1.end());
  sweep.mean_f1 =
      std::accumulate(sweep.f1.begin(), sweep.f1.end(), 0.0) / thresholds;
  return sweep;
}

SummaryMetrics SummaryMetrics::from_vector(const std::vector<double>& v) {
  if (v.size() != 4) throw Error("summary needs exactly four values");
  return SummaryMetrics{v[0], v[1], v[2], v[3]};
}

double weighted_average(std::span<const double> values,
                        std::span<const int> counts) {
  if (values.size() != counts.size()) {
    throw Error("values and class counts differ in size");
  }
  long total = 0;
  for (int c : counts) {
    if (c < 0) throw Error("class counts must be non-negative");
    total += c;
  }
  if (total == 0) throw Error("class counts are all zero");
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    sum += static_cast<double>(counts[i]) / total * values[i];
  }
  return sum;
}

SummaryMetrics aggregate(const std::vector<double>& max_f1,
                         const std::vector<double>& mean_f1,
                         const std::vector<int>& gt_counts) {
  if (max_f1.size() != mean_f1.size() || max_f1.empty()) {
    throw Error("per-activity F1 vectors are empty or mismatched");
  }
  SummaryMetrics s;
  s.weighted_max_f1 = weighted_average(max_f1, gt_counts);
  s.weighted_mean_f1 = weighted_average(mean_f1, gt_counts);
  const double n = static_cast<double>(max_f1.size());
  s.max_f1 = std::accumulate(max_f1.begin(), max_f1.end(), 0.0) / n;
  s.mean_f1 = std::accumulate(mean_f1.begin(), mean_f1.end(), 0.0) / n;
  return s;
}

EvalResult evaluate_action_map(const Eigen::MatrixXd& normalized_map,
                               const GlobalIndex& index,
                               const std::vector<Scene>& scenes,
                               const std::vector<int>& eval_scenes,
                               const ViewParams& view) {
  if (normalized_map.rows() != index.size()) {
    throw Error("Action Map rows do not match the global index");
  }
  const int a = static_cast<int>(normalized_map.cols());
  std::vector<std::vector<double>> scores(a);
  std::vector<std::vector<bool>> gt(a);
  for (int s : eval_scenes) {
    const Scene& scene = scenes.at(s);
    const auto block = normalized_map.middleRows(index.offset(s),
                                                 scene.grid.cell_count());
    for (const ViewPose& pose : scene.poses) {
      const ViewTriangle tri = view_triangle(pose, view);
      const Eigen::VectorXd score = image_scores(block, tri, scene.grid);
      const std::vector<bool> labels = image_gt(scene.grid, tri);
      for (int c = 0; c < a; ++c) {
        scores[c].push_back(std::clamp(score[c], 0.0, 1.0));
        gt[c].push_back(labels[c]);
      }
    }
  }
  EvalResult result;
  result.image_count = a > 0 ? static_cast<int>(scores[0].size()) : 0;
  if (result.image_count == 0) throw Error("no camera poses to evaluate");
  for (int c = 0; c < a; ++c) {
    const F1Sweep sweep = f1_sweep(scores[c], gt[c]);
    result.max_f1.push_back(sweep.max_f1);
    result.mean_f1.push_back(sweep.mean_f1);
    result.gt_counts.push_back(
        static_cast<int>(std::count(gt[c].begin(), gt[c].end(), true)));
  }
  result.summary = aggregate(result.max_f1, result.mean_f1, result.gt_counts);
  return result;
}

}  // namespace actionmap
