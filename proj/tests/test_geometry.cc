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


#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "actionmap/error.h"
#include "actionmap/geometry.h"
#include "fixtures.h"

namespace actionmap {
namespace {

// Smallest-eigenvalue eigenvector of the scatter matrix.
Plane eigen_plane_oracle(const std::vector<Eigen::Vector3d>& pts) {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) scatter += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(scatter);
  Eigen::Vector3d n = es.eigenvectors().col(0);
  return Plane{n, n.dot(mean)};
}

TEST_CASE("least-squares plane on analytic planes") {
  std::vector<Eigen::Vector3d> flat = {
      {0, 0, 2}, {1, 0, 2}, {0, 1, 2}, {3, 4, 2}};
  Plane p = fit_plane_least_squares(flat);
  CHECK(p.normal.isApprox(Eigen::Vector3d::UnitZ(), 1e-12));
  CHECK(p.offset == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<Eigen::Vector3d> diag = {
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}};
  p = fit_plane_least_squares(diag);
  const Eigen::Vector3d expected = Eigen::Vector3d::Ones().normalized();
  CHECK((p.normal - expected).norm() < 1e-12);
  CHECK(std::abs(p.offset - 1.0 / std::sqrt(3.0)) < 1e-12);

  CHECK_THROWS_AS(fit_plane_least_squares(std::vector<Eigen::Vector3d>{
                      {0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}}),
                  Error);
  CHECK_THROWS_AS(
      fit_plane_least_squares(std::vector<Eigen::Vector3d>{{0, 0, 0}}), Error);
}

TEST_CASE("least-squares plane agrees with the eigen-decomposition oracle") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    Eigen::Vector3d n(uni(rng) * 0.2, uni(rng) * 0.2, 1.0);
    n.normalize();
    std::vector<Eigen::Vector3d> pts;
    const Eigen::Vector3d e1 = n.unitOrthogonal(), e2 = n.cross(e1);
    for (int i = 0; i < 200; ++i) {
      pts.push_back(0.7 * n + uni(rng) * e1 + uni(rng) * e2 + noise(rng) * n);
    }
    const Plane fit = fit_plane_least_squares(pts);
    const Plane oracle = eigen_plane_oracle(pts);
    const double sign = fit.normal.dot(oracle.normal) < 0 ? -1.0 : 1.0;
    CHECK((fit.normal - sign * oracle.normal).norm() < 1e-9);
    CHECK(std::abs(fit.offset - sign * oracle.offset) < 1e-9);
    double rms = 0.0;
    for (const auto& q : pts) rms += std::pow(fit.signed_distance(q), 2);
    rms = std::sqrt(rms / pts.size());
    CHECK(rms <= 0.02);
    CHECK(std::abs(fit.normal.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("RANSAC finds the floor under clutter and is reproducible") {
  const auto scene = testing::make_floor_scene(7, 0.3);
  RansacParams params;
  params.seed = 3;
  const Plane a = refine_ground_plane_ransac(
      scene.height_plane, scene.points, params, scene.user_height);
  const Plane b = refine_ground_plane_ransac(
      scene.height_plane, scene.points, params, scene.user_height);
  CHECK(angle_between_deg(a, scene.floor) < 1.0);
  CHECK(a.normal == b.normal);
  CHECK(a.offset == b.offset);
  CHECK(a.normal.dot(scene.floor.normal) > 0.0);
}

TEST_CASE("RANSAC without outliers equals the least-squares floor fit") {
  const auto scene = testing::make_floor_scene(11, 0.0);
  const Plane r = refine_ground_plane_ransac(scene.height_plane, scene.points,
                                             RansacParams{}, scene.user_height);
  Plane ls = fit_plane_least_squares(scene.points);
  if (ls.normal.dot(r.normal) < 0) ls = Plane{-ls.normal, -ls.offset};
  CHECK((r.normal - ls.normal).norm() < 1e-6);
  CHECK(std::abs(r.offset - ls.offset) < 1e-6);
}

TEST_CASE("RANSAC reports no consensus when nothing lies below the cameras") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 200; ++i) {
    const double x = uni(rng), y = uni(rng), z = 8.0 + uni(rng);
    pts.emplace_back(x, y, z);
  }
  const Plane height{Eigen::Vector3d::UnitZ(), 1.7};
  CHECK_THROWS_WITH_AS(
      refine_ground_plane_ransac(height, pts, RansacParams{}, 1.7),
      doctest::Contains("no consensus"), Error);
}

TEST_CASE("metric scale") {
  const Plane ground{Eigen::Vector3d::UnitZ(), 0.0};
  CHECK(estimate_metric_scale(ground, Plane{Eigen::Vector3d::UnitZ(), 1.7},
                              1.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estimate_metric_scale(ground, Plane{Eigen::Vector3d::UnitZ(), 0.85},
                              1.7) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      estimate_metric_scale(ground, Plane{Eigen::Vector3d::UnitZ(), 0.0}, 1.7),
      Error);
  CHECK_THROWS_AS(
      estimate_metric_scale(ground, Plane{Eigen::Vector3d::UnitX(), 1.0}, 1.7),
      Error);
  CHECK_THROWS_AS(
      estimate_metric_scale(ground, Plane{Eigen::Vector3d::UnitZ(), 1.0}, 0.0),
      Error);

  // Scaling all geometry by c scales the result by 1/c.
  const Plane height{Eigen::Vector3d(0.05, 0.0, 1.0).normalized(), 2.3};
  const Plane ground_tilted{height.normal, 0.4};
  const double s1 = estimate_metric_scale(ground_tilted, height, 1.7);
  const double s3 = estimate_metric_scale(
      Plane{ground_tilted.normal, 3.0 * ground_tilted.offset},
      Plane{height.normal, 3.0 * height.offset}, 1.7);
  CHECK(std::abs(s1 / s3 - 3.0) < 1e-12);
}

TEST_CASE("projection to the grid") {
  const Plane floor{Eigen::Vector3d::UnitZ(), 0.0};
  const Eigen::Vector2d origin(0, 0);
  CHECK(project_to_grid(floor, {0.3, 0.3, 1.7}, origin, 0.25) == Cell{1, 1});
  CHECK(project_to_grid(floor, {0, 0, 0}, origin, 0.25) == Cell{0, 0});

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-4.0, 4.0);
  const Plane tilted{Eigen::Vector3d(0.1, -0.2, 1.0).normalized(), 0.3};
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d q(uni(rng), uni(rng), uni(rng));
    const Eigen::Vector3d p = project_onto_plane(tilted, q);
    REQUIRE(std::abs(tilted.signed_distance(p)) < 1e-12);
    REQUIRE((project_onto_plane(tilted, p) - p).norm() < 1e-12);
  }
}

TEST_CASE("plane frame is orthonormal and right-handed") {
  for (const Eigen::Vector3d n :
       {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0),
        Eigen::Vector3d(0.3, 0.2, 0.9).normalized()}) {
    const PlaneFrame f = plane_frame(Plane{n, 0.5});
    CHECK(std::abs(f.x_axis.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.y_axis.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.x_axis.dot(f.y_axis)) < 1e-12);
    CHECK((f.x_axis.cross(f.y_axis) - n).norm() < 1e-12);
  }
}

TEST_CASE("detections back-project to the floor") {
  const Plane floor{Eigen::Vector3d::UnitZ(), 0.0};
  const Eigen::Vector2d origin(0, 0);
  const Eigen::Vector3d kp(0.6, 0.35, 0.9);
  const std::vector<Eigen::Vector3d> single = {kp};
  CHECK((backproject_detection(single, floor, origin, 0.25) -
         project_to_grid_continuous(floor, kp, origin, 0.25))
            .norm() < 1e-12);

  const Eigen::Vector3d q(1.0, 2.0, 0.5), d(0.2, -0.1, 0.3);
  const std::vector<Eigen::Vector3d> pair = {q + d, q - d};
  CHECK((backproject_detection(pair, floor, origin, 0.25) -
         project_to_grid_continuous(floor, q, origin, 0.25))
            .norm() < 1e-12);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.1);
  const Eigen::Vector3d object(2.0, 1.5, 0.0);
  std::vector<Eigen::Vector3d> cluster;
  for (int i = 0; i < 30; ++i) {
    cluster.push_back(object +
                      Eigen::Vector3d(noise(rng), noise(rng), 0.8 + noise(rng)));
  }
  const Eigen::Vector2d truth =
      project_to_grid_continuous(floor, object, origin, 0.25);
  CHECK((backproject_detection(cluster, floor, origin, 0.25) - truth).norm() <
        2.0);
  CHECK_THROWS_AS(backproject_detection(std::vector<Eigen::Vector3d>{}, floor,
                                        origin, 0.25),
                  Error);
}

}  // namespace
}  // namespace actionmap
