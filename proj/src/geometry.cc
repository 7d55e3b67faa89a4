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

#include "actionmap/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "actionmap/error.h"

namespace actionmap {
namespace {

// Sign convention shared by every fitted plane.
Plane canonical(Eigen::Vector3d normal, double offset) {
  Eigen::Index largest = 0;
  normal.cwiseAbs().maxCoeff(&largest);
  if (normal[largest] < 0.0) {
    normal = -normal;
    offset = -offset;
  }
  return Plane{normal, offset};
}

Plane oriented_like(const Plane& plane, const Eigen::Vector3d& up) {
  if (plane.normal.dot(up) < 0.0) return Plane{-plane.normal, -plane.offset};
  return plane;
}

int count_inliers(const Plane& plane, std::span<const Eigen::Vector3d> points,
                  double threshold, std::vector<int>* inliers = nullptr) {
  int count = 0;
  if (inliers) inliers->clear();
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (std::abs(plane.signed_distance(points[i])) <= threshold) {
      ++count;
      if (inliers) inliers->push_back(i);
    }
  }
  return count;
}

}  // namespace

Plane fit_plane_least_squares(std::span<const Eigen::Vector3d> points) {
  if (points.size() < 3) throw Error("plane fit needs at least 3 points");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::MatrixXd centered(points.size(), 3);
  for (size_t i = 0; i < points.size(); ++i) {
    centered.row(i) = (points[i] - centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::Vector3d sv = svd.singularValues();
  const double scale = std::max(sv[0], 1e-300);
  if (sv[0] < 1e-12 || sv[1] <= 1e-9 * scale) {
    throw Error("degenerate point set: points are coincident or collinear");
  }
  Eigen::Vector3d normal = svd.matrixV().col(2).normalized();
  return canonical(normal, normal.dot(centroid));
}

double angle_between_deg(const Plane& a, const Plane& b) {
  const double c = std::clamp(std::abs(a.normal.dot(b.normal)), 0.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

Plane refine_ground_plane_ransac(const Plane& height_plane,
                                 std::span<const Eigen::Vector3d> points,
                                 const RansacParams& params,
                                 double user_height) {
  if (points.empty()) throw Error("ground plane search needs points");
  if (params.iterations < 1) throw Error("RANSAC needs at least 1 iteration");
  if (!(params.inlier_threshold > 0.0)) {
    throw Error("RANSAC inlier threshold must be positive");
  }
  if (!(user_height > 0.0)) throw Error("user height must be positive");

  // Most reconstruction points lie below eye level; point the height-plane
  // normal away from them.
  Plane height = height_plane;
  {
    std::vector<double> d;
    d.reserve(points.size());
    for (const auto& p : points) d.push_back(height.signed_distance(p));
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    if (d[d.size() / 2] > 0.0) height = Plane{-height.normal, -height.offset};
  }
  const Eigen::Vector3d up = height.normal;
  const int n = static_cast<int>(points.size());
  const double step =
      params.sweep_depth * user_height / std::max(1, params.sweep_steps);

  std::mt19937_64 rng(params.seed);
  Plane best_plane;
  int best_count = -1;
  std::vector<int> band, inliers;

  for (int k = 1; k <= params.sweep_steps; ++k) {
    const double candidate = height.offset - k * step;
    band.clear();
    for (int i = 0; i < n; ++i) {
      if (std::abs(up.dot(points[i]) - candidate) <= 0.5 * step) {
        band.push_back(i);
      }
    }
    if (band.size() < 3) continue;

    std::uniform_int_distribution<int> pick(0, static_cast<int>(band.size()) - 1);
    Plane local_best;
    int local_count = -1;
    for (int it = 0; it < params.iterations; ++it) {
      const int a = band[pick(rng)], b = band[pick(rng)], c = band[pick(rng)];
      if (a == b || b == c || a == c) continue;
      Eigen::Vector3d normal =
          (points[b] - points[a]).cross(points[c] - points[a]);
      const double norm = normal.norm();
      if (norm < 1e-12) continue;
      normal /= norm;
      Plane model = oriented_like(Plane{normal, normal.dot(points[a])}, up);
      if (angle_between_deg(model, height) > params.max_tilt_deg) continue;
      const int count = count_inliers(model, points, params.inlier_threshold);
      if (count > local_count) {
        local_count = count;
        local_best = model;
      }
    }
    if (local_count < 3) continue;

    // Least-squares refit on the consensus set until it stops changing.
    Plane refined = local_best;
    count_inliers(refined, points, params.inlier_threshold, &inliers);
    for (int round = 0; round < 10 && inliers.size() >= 3; ++round) {
      std::vector<Eigen::Vector3d> subset;
      subset.reserve(inliers.size());
      for (int i : inliers) subset.push_back(points[i]);
      Plane fitted;
      try {
        fitted = oriented_like(fit_plane_least_squares(subset), up);
      } catch (const Error&) {
        break;
      }
      if (angle_between_deg(fitted, height) > params.max_tilt_deg) break;
      std::vector<int> next;
      count_inliers(fitted, points, params.inlier_threshold, &next);
      refined = fitted;
      if (next == inliers) break;
      inliers = std::move(next);
    }
    const int count = count_inliers(refined, points, params.inlier_threshold);
    if (count > best_count) {
      best_count = count;
      best_plane = refined;
    }
  }

  if (best_count < 0 || best_count < params.min_inlier_fraction * n) {
    throw Error("no consensus: ground plane search found no candidate with "
                "enough inliers");
  }
  return best_plane;
}

double inter_plane_distance(const Plane& ground, const Plane& height_plane) {
  const Plane height = oriented_like(height_plane, ground.normal);
  const Eigen::Vector3d foot = height.normal * height.offset;
  return ground.signed_distance(foot);
}

double estimate_metric_scale(const Plane& ground, const Plane& height_plane,
                             double user_height_m, double max_tilt_deg) {
  if (!(user_height_m > 0.0)) throw Error("user height must be positive");
  if (angle_between_deg(ground, height_plane) > max_tilt_deg) {
    throw Error("ground and height planes are not parallel");
  }
  const double distance = inter_plane_distance(ground, height_plane);
  if (!(distance > 0.0)) {
    throw Error("height plane does not lie above the ground plane");
  }
  return user_height_m / distance;
}

PlaneFrame plane_frame(const Plane& plane) {
  const Eigen::Vector3d& n = plane.normal;
  Eigen::Vector3d x = Eigen::Vector3d::UnitX() - n.x() * n;
  if (x.norm() < 0.1) x = Eigen::Vector3d::UnitY() - n.y() * n;
  x.normalize();
  return PlaneFrame{n * plane.offset, x, n.cross(x)};
}

Eigen::Vector3d project_onto_plane(const Plane& plane,
                                   const Eigen::Vector3d& point) {
  return point - plane.signed_distance(point) * plane.normal;
}

Eigen::Vector2d project_to_grid_continuous(const Plane& ground,
                                           const Eigen::Vector3d& point,
                                           const Eigen::Vector2d& origin,
                                           double cell_size) {
  if (!(cell_size > 0.0)) throw Error("cell size must be positive");
  const PlaneFrame frame = plane_frame(ground);
  const Eigen::Vector3d rel = project_onto_plane(ground, point) - frame.origin;
  return (Eigen::Vector2d(rel.dot(frame.x_axis), rel.dot(frame.y_axis)) -
          origin) /
         cell_size;
}

Cell project_to_grid(const Plane& ground, const Eigen::Vector3d& point,
                     const Eigen::Vector2d& origin, double cell_size) {
  const Eigen::Vector2d g =
      project_to_grid_continuous(ground, point, origin, cell_size);
  return Cell{static_cast<int>(std::floor(g.x())),
              static_cast<int>(std::floor(g.y()))};
}

Eigen::Vector2d backproject_detection(
    std::span<const Eigen::Vector3d> keypoints, const Plane& ground,
    const Eigen::Vector2d& origin, double cell_size) {
  if (keypoints.empty()) throw Error("detection has no keypoints");
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& k : keypoints) mean += k;
  mean /= static_cast<double>(keypoints.size());
  return project_to_grid_continuous(ground, mean, origin, cell_size);
}

}  // namespace actionmap
