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


#ifndef ACTIONMAP_TESTS_FIXTURES_H_
#define ACTIONMAP_TESTS_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "actionmap/geometry.h"
#include "actionmap/rwnmf.h"
#include "actionmap/side_info.h"

namespace actionmap::testing {

// A tilted floor seen by cameras at eye height, plus ceiling and clutter
// points as outliers.
struct FloorScene {
  Plane floor;
  Plane height_plane;
  double user_height = 1.7;
  std::vector<Eigen::Vector3d> cameras;
  std::vector<Eigen::Vector3d> points;
};

inline FloorScene make_floor_scene(uint64_t seed, double outlier_fraction,
                                   double noise = 0.01) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::Vector3d normal(0.08 * uni(rng), 0.08 * uni(rng), 1.0);
  normal.normalize();
  const double offset = 0.5 * uni(rng);
  FloorScene s;
  s.floor = Plane{normal, offset};
  s.height_plane = Plane{normal, offset + s.user_height};

  const Eigen::Vector3d e1 = normal.unitOrthogonal();
  const Eigen::Vector3d e2 = normal.cross(e1);
  auto on_plane = [&](double height, double extent) {
    return Eigen::Vector3d((offset + height) * normal +
                           extent * uni(rng) * e1 + extent * uni(rng) * e2);
  };
  for (int i = 0; i < 40; ++i) s.cameras.push_back(on_plane(s.user_height, 4));

  const int total = 600;
  const int outliers = static_cast<int>(std::lround(outlier_fraction * total));
  for (int i = 0; i < total - outliers; ++i) {
    s.points.push_back(on_plane(noise * gauss(rng), 5.0));
  }
  for (int i = 0; i < outliers; ++i) {
    if (i % 2 == 0) {
      s.points.push_back(on_plane(2.6 + noise * gauss(rng), 5.0));
    } else {
      s.points.push_back(on_plane(0.2 + 2.2 * (0.5 + 0.5 * uni(rng)), 5.0));
    }
  }
  return s;
}

// Random non-negative instance with a symmetric [0,1] Gram matrix.
struct RandomInstance {
  ActionMatrixBundle bundle;
  GramMatrix k_u;
};

inline RandomInstance make_random_instance(uint64_t seed, int m, int a,
                                           double observed_fraction = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  RandomInstance inst;
  auto& b = inst.bundle;
  b.observed = Eigen::MatrixXd::Zero(m, a);
  b.weights = Eigen::MatrixXd::Zero(m, a);
  b.mask.setConstant(m, a, false);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < a; ++j) {
      if (uni(rng) < observed_fraction) {
        b.mask(i, j) = true;
        b.observed(i, j) = uni(rng) < 0.5 ? 1.0 : 0.0;
        b.weights(i, j) = 0.1 + uni(rng);
      }
    }
  }
  Eigen::MatrixXd k(m, m);
  for (int i = 0; i < m; ++i) {
    k(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double v = uni(rng) < 0.1 ? uni(rng) : 0.0;
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  inst.k_u = GramMatrix(k);
  return inst;
}

// Five images scored for one activity, with the confusion counts worked out
// by hand for each band of thresholds k / 101.
struct ThresholdBand {
  int last_k;  // band covers thresholds up to and including this k
  int tp, fp, fn;
};

struct SweepFixture {
  std::vector<double> scores = {0.92, 0.74, 0.51, 0.33, 0.08};
  std::vector<bool> gt = {true, false, true, true, false};
  std::vector<ThresholdBand> bands = {{8, 3, 2, 0},  {33, 3, 1, 0},
                                      {51, 2, 1, 1}, {74, 1, 1, 2},
                                      {92, 1, 0, 2}, {100, 0, 0, 3}};
};

// Confusion counts by direct enumeration.
inline ThresholdBand brute_force_counts(const std::vector<double>& scores,
                                        const std::vector<bool>& gt,
                                        double threshold) {
  ThresholdBand c{0, 0, 0, 0};
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool positive = scores[i] >= threshold;
    c.tp += positive && gt[i];
    c.fp += positive && !gt[i];
    c.fn += !positive && gt[i];
  }
  return c;
}

inline double f1_from_counts(const ThresholdBand& c) {
  if (c.tp == 0) return 0.0;
  return 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn);
}

}  // namespace actionmap::testing

#endif  // ACTIONMAP_TESTS_FIXTURES_H_
