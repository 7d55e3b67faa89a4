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

#ifndef ACTIONMAP_GEOMETRY_H_
#define ACTIONMAP_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "actionmap/scene_model.h"

namespace actionmap {

// The plane {q : normal . q = offset}, with a unit normal.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;

  double signed_distance(const Eigen::Vector3d& q) const {
    return normal.dot(q) - offset;
  }
};

struct CameraPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector2d heading = Eigen::Vector2d::UnitX();
};

struct RansacParams {
  int iterations = 1000;
  double inlier_threshold = 0.05;
  double min_inlier_fraction = 0.2;
  uint64_t seed = 1;
  // Maximum angle between the height plane and any accepted ground plane.
  double max_tilt_deg = 15.0;
  // Translation sweep: candidate planes at `sweep_steps` evenly spaced
  // offsets down to `sweep_depth` user heights below the height plane.
  int sweep_steps = 20;
  double sweep_depth = 2.5;
};

// Total least squares plane. The normal is oriented so that its largest
// magnitude component is positive.
Plane fit_plane_least_squares(std::span<const Eigen::Vector3d> points);

double angle_between_deg(const Plane& a, const Plane& b);

// Ground plane search below the camera height plane. The returned normal
// points from the floor towards the cameras. `user_height` is in
// reconstruction units and only bounds the sweep.
Plane refine_ground_plane_ransac(const Plane& height_plane,
                                 std::span<const Eigen::Vector3d> points,
                                 const RansacParams& params,
                                 double user_height);

// Signed height of `height_plane` above `ground` along the ground normal.
double inter_plane_distance(const Plane& ground, const Plane& height_plane);

// Meters per reconstruction unit.
double estimate_metric_scale(const Plane& ground, const Plane& height_plane,
                             double user_height_m,
                             double max_tilt_deg = 15.0);

// Fixed in-plane frame: the x axis is world x projected onto the plane
// (world y when x is nearly parallel to the normal), y = normal x x.
struct PlaneFrame {
  Eigen::Vector3d origin;
  Eigen::Vector3d x_axis;
  Eigen::Vector3d y_axis;
};
PlaneFrame plane_frame(const Plane& plane);

Eigen::Vector3d project_onto_plane(const Plane& plane,
                                   const Eigen::Vector3d& point);

// Continuous grid coordinates of the orthogonal projection of `point`.
Eigen::Vector2d project_to_grid_continuous(const Plane& ground,
                                           const Eigen::Vector3d& point,
                                           const Eigen::Vector2d& origin,
                                           double cell_size);

Cell project_to_grid(const Plane& ground, const Eigen::Vector3d& point,
                     const Eigen::Vector2d& origin, double cell_size);

// Mean of the keypoints, projected to the floor, in continuous grid units.
Eigen::Vector2d backproject_detection(
    std::span<const Eigen::Vector3d> keypoints, const Plane& ground,
    const Eigen::Vector2d& origin, double cell_size);

}  // namespace actionmap

#endif  // ACTIONMAP_GEOMETRY_H_
