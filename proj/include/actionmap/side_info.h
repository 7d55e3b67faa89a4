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

#ifndef ACTIONMAP_SIDE_INFO_H_
#define ACTIONMAP_SIDE_INFO_H_

#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "actionmap/scene_model.h"

namespace actionmap {

// Side information of one row of the global Action Map.
struct LocationFeatures {
  int scene = 0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();  // grid units
  Eigen::VectorXd scene_scores;                        // p, length C
  Eigen::VectorXd object_scores;                       // o, length F
  bool has_object = false;
};

// Which appearance kernels are mixed with the spatial one.
enum class KernelVariant { kS, kSO, kSP, kSOP };

std::string to_string(KernelVariant variant);
KernelVariant parse_kernel_variant(std::string_view name);

struct KernelConfig {
  double alpha = 0.5;
  double sigma_s = 2.0;  // grid cells
  double gamma_p = 100.0;
  double gamma_o = 100.0;
  KernelVariant variant = KernelVariant::kSOP;
  double chi2_epsilon = 1e-10;
  // Gram entries below this are dropped.
  double sparsify_threshold = 1e-4;
  // Largest M stored densely; beyond it the Gram matrix is sparse and
  // requires a positive sparsify_threshold.
  int dense_limit = 20000;

  void validate() const;
};

struct KernelWeights {
  double spatial = 0.0;
  double scene = 0.0;
  double object = 0.0;
};
KernelWeights kernel_weights(const KernelConfig& cfg);

// Radius of the object-score neighborhood in grid cells.
inline constexpr double kObjectRadius = std::numbers::sqrt2;

// Gaussian falloff of a back-projected detection at floor distance z.
double object_score_at_distance(double z);

struct ImageSceneScore {
  Cell cell;
  Eigen::VectorXd scores;
};

// Per-cell mean of the image scores whose cell lies within `radius_cells`.
// Rows are the scene's cells in row-major order.
Eigen::MatrixXd aggregate_scene_scores(std::span<const ImageSceneScore> images,
                                       int width, int height,
                                       double radius_cells = 2.0);

struct GroundDetection {
  int category = 0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();  // continuous grid units
};

// o_fa per cell: the strongest in-radius detection of category f, measured
// from the cell center.
Eigen::MatrixXd aggregate_object_scores(
    std::span<const GroundDetection> detections, int width, int height,
    int category_count);

double kernel_spatial(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                      double sigma_s);
double kernel_chi2(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   double gamma, double epsilon = 1e-10);
double combined_kernel(const LocationFeatures& a, const LocationFeatures& b,
                       const KernelConfig& cfg);

// Symmetric non-negative similarity matrix with cached row sums. Stored
// densely up to KernelConfig::dense_limit rows, sparse above.
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(Eigen::MatrixXd dense);
  explicit GramMatrix(Eigen::SparseMatrix<double, Eigen::RowMajor> sparse);

  static GramMatrix identity(int n);

  int size() const { return size_; }
  bool is_sparse() const { return sparse_storage_; }
  double coeff(int i, int j) const;
  const Eigen::VectorXd& degree() const { return degree_; }
  // K * x
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd to_dense() const;

 private:
  int size_ = 0;
  bool sparse_storage_ = false;
  Eigen::MatrixXd dense_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> sparse_;
  Eigen::VectorXd degree_;
};

GramMatrix build_gram_matrix(std::span<const LocationFeatures> features,
                             const KernelConfig& cfg);

// Row features for stacked scenes, following the global row order.
std::vector<LocationFeatures> stacked_features(const std::vector<Scene>& scenes);

}  // namespace actionmap

#endif  // ACTIONMAP_SIDE_INFO_H_
