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

#include "actionmap/side_info.h"

#include <algorithm>
#include <cmath>

#include "actionmap/error.h"

namespace actionmap {

std::string to_string(KernelVariant variant) {
  switch (variant) {
    case KernelVariant::kS:
      return "S";
    case KernelVariant::kSO:
      return "SO";
    case KernelVariant::kSP:
      return "SP";
    case KernelVariant::kSOP:
      return "SOP";
  }
  return "?";
}

KernelVariant parse_kernel_variant(std::string_view name) {
  if (name == "S") return KernelVariant::kS;
  if (name == "SO") return KernelVariant::kSO;
  if (name == "SP") return KernelVariant::kSP;
  if (name == "SOP") return KernelVariant::kSOP;
  throw Error("unknown kernel variant '" + std::string(name) +
              "' (expected S, SO, SP or SOP)");
}

void KernelConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0, 1]");
  if (!(sigma_s > 0.0)) throw Error("sigma_s must be positive");
  if (!(gamma_p > 0.0) || !(gamma_o > 0.0)) {
    throw Error("chi-squared bandwidths must be positive");
  }
  if (!(chi2_epsilon >= 0.0)) throw Error("chi2_epsilon must be >= 0");
  if (!(sparsify_threshold >= 0.0)) {
    throw Error("sparsify threshold must be >= 0");
  }
}

KernelWeights kernel_weights(const KernelConfig& cfg) {
  const double a = cfg.alpha;
  switch (cfg.variant) {
    case KernelVariant::kS:
      return {1.0, 0.0, 0.0};
    case KernelVariant::kSO:
      return {1.0 - a, 0.0, a};
    case KernelVariant::kSP:
      return {1.0 - a, a, 0.0};
    case KernelVariant::kSOP:
      return {1.0 - a, 0.5 * a, 0.5 * a};
  }
  return {1.0, 0.0, 0.0};
}

double object_score_at_distance(double z) {
  const double r2 = kObjectRadius * kObjectRadius;
  return std::exp(-z * z / (2.0 * r2)) / std::sqrt(2.0 * r2 * std::numbers::pi);
}

Eigen::MatrixXd aggregate_scene_scores(std::span<const ImageSceneScore> images,
                                       int width, int height,
                                       double radius_cells) {
  if (width < 1 || height < 1) throw Error("invalid grid dimensions");
  if (!(radius_cells >= 0.0)) throw Error("radius must be non-negative");
  const Eigen::Index classes = images.empty() ? 0 : images.front().scores.size();

  // Bucket images by cell so each location only visits its neighborhood.
  std::vector<Eigen::VectorXd> sum(static_cast<size_t>(width) * height,
                                   Eigen::VectorXd::Zero(classes));
  std::vector<int> count(sum.size(), 0);
  for (const auto& image : images) {
    if (image.scores.size() != classes) {
      throw Error("image scene-score vectors have inconsistent lengths");
    }
    if (image.cell.x < 0 || image.cell.y < 0 || image.cell.x >= width ||
        image.cell.y >= height) {
      continue;
    }
    const size_t i = static_cast<size_t>(image.cell.y) * width + image.cell.x;
    sum[i] += image.scores;
    ++count[i];
  }

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(sum.size(), classes);
  const int reach = static_cast<int>(std::floor(radius_cells));
  const double r2 = radius_cells * radius_cells;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(classes);
      int n = 0;
      for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
          if (dx * dx + dy * dy > r2) continue;
          const size_t j = static_cast<size_t>(ny) * width + nx;
          if (count[j] == 0) continue;
          acc += sum[j];
          n += count[j];
        }
      }
      if (n > 0) p.row(static_cast<Eigen::Index>(y) * width + x) = acc / n;
    }
  }
  return p;
}

Eigen::MatrixXd aggregate_object_scores(
    std::span<const GroundDetection> detections, int width, int height,
    int category_count) {
  if (width < 1 || height < 1) throw Error("invalid grid dimensions");
  Eigen::MatrixXd o =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(width) * height,
                            category_count);
  const double r2 = kObjectRadius * kObjectRadius;
  for (const auto& d : detections) {
    if (d.category < 0 || d.category >= category_count) {
      throw Error("unknown object category " + std::to_string(d.category));
    }
    const int x0 = static_cast<int>(std::floor(d.position.x() - kObjectRadius));
    const int x1 = static_cast<int>(std::ceil(d.position.x() + kObjectRadius));
    const int y0 = static_cast<int>(std::floor(d.position.y() - kObjectRadius));
    const int y1 = static_cast<int>(std::ceil(d.position.y() + kObjectRadius));
    for (int y = std::max(0, y0); y <= std::min(height - 1, y1); ++y) {
      for (int x = std::max(0, x0); x <= std::min(width - 1, x1); ++x) {
        const Eigen::Vector2d center(x + 0.5, y + 0.5);
        const double z2 = (center - d.position).squaredNorm();
        if (z2 > r2) continue;
        double& entry = o(static_cast<Eigen::Index>(y) * width + x, d.category);
        entry = std::max(entry, object_score_at_distance(std::sqrt(z2)));
      }
    }
  }
  return o;
}

double kernel_spatial(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                      double sigma_s) {
  return std::exp(-(a - b).squaredNorm() / (2.0 * sigma_s * sigma_s));
}

double kernel_chi2(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   double gamma, double epsilon) {
  if (u.size() != v.size()) throw Error("chi-squared kernel length mismatch");
  double distance = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0 || v[i] < 0.0) {
      throw Error("chi-squared kernel needs non-negative entries");
    }
    const double diff = u[i] - v[i];
    if (diff != 0.0) distance += diff * diff / (u[i] + v[i] + epsilon);
  }
  return std::exp(-gamma * distance);
}

double combined_kernel(const LocationFeatures& a, const LocationFeatures& b,
                       const KernelConfig& cfg) {
  const KernelWeights w = kernel_weights(cfg);
  double k = 0.0;
  if (w.spatial > 0.0 && a.scene == b.scene) {
    k += w.spatial * kernel_spatial(a.position, b.position, cfg.sigma_s);
  }
  if (w.scene > 0.0) {
    k += w.scene * kernel_chi2(a.scene_scores, b.scene_scores, cfg.gamma_p,
                               cfg.chi2_epsilon);
  }
  if (w.object > 0.0 && a.has_object && b.has_object) {
    k += w.object * kernel_chi2(a.object_scores, b.object_scores, cfg.gamma_o,
                                cfg.chi2_epsilon);
  }
  return k;
}

GramMatrix::GramMatrix(Eigen::MatrixXd dense)
    : size_(static_cast<int>(dense.rows())),
      sparse_storage_(false),
      dense_(std::move(dense)) {
  if (dense_.rows() != dense_.cols()) throw Error("Gram matrix must be square");
  degree_ = dense_.rowwise().sum();
}

GramMatrix::GramMatrix(Eigen::SparseMatrix<double, Eigen::RowMajor> sparse)
    : size_(static_cast<int>(sparse.rows())),
      sparse_storage_(true),
      sparse_(std::move(sparse)) {
  if (sparse_.rows() != sparse_.cols()) {
    throw Error("Gram matrix must be square");
  }
  degree_ = sparse_ * Eigen::VectorXd::Ones(size_);
}

GramMatrix GramMatrix::identity(int n) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> eye(n, n);
  eye.setIdentity();
  return GramMatrix(std::move(eye));
}

double GramMatrix::coeff(int i, int j) const {
  return sparse_storage_ ? sparse_.coeff(i, j) : dense_(i, j);
}

Eigen::MatrixXd GramMatrix::multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != size_) throw Error("Gram product shape mismatch");
  if (sparse_storage_) return sparse_ * x;
  return dense_ * x;
}

Eigen::MatrixXd GramMatrix::to_dense() const {
  if (sparse_storage_) return Eigen::MatrixXd(sparse_);
  return dense_;
}

GramMatrix build_gram_matrix(std::span<const LocationFeatures> features,
                             const KernelConfig& cfg) {
  cfg.validate();
  const int m = static_cast<int>(features.size());
  if (m > 0) {
    const auto c = features.front().scene_scores.size();
    const auto f = features.front().object_scores.size();
    for (const auto& loc : features) {
      if (loc.scene_scores.size() != c || loc.object_scores.size() != f) {
        throw Error("location features have inconsistent dimensions");
      }
    }
  }
  const double tau = cfg.sparsify_threshold;
  const bool dense = m <= cfg.dense_limit;
  if (!dense && !(tau > 0.0)) {
    throw Error("Gram matrix with " + std::to_string(m) +
                " rows exceeds the dense limit; enable sparsification");
  }

  if (dense) {
    Eigen::MatrixXd k(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double v = combined_kernel(features[i], features[j], cfg);
        if (v < tau) v = 0.0;
        k(i, j) = v;
        k(j, i) = v;
      }
    }
    return GramMatrix(std::move(k));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double v = combined_kernel(features[i], features[j], cfg);
      if (v < tau) continue;
      triplets.emplace_back(i, j, v);
      if (j != i) triplets.emplace_back(j, i, v);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> k(m, m);
  k.setFromTriplets(triplets.begin(), triplets.end());
  return GramMatrix(std::move(k));
}

std::vector<LocationFeatures> stacked_features(const std::vector<Scene>& scenes) {
  std::vector<LocationFeatures> out;
  for (int s = 0; s < static_cast<int>(scenes.size()); ++s) {
    const Scene& scene = scenes[s];
    const SceneGrid& grid = scene.grid;
    if (scene.scene_scores.rows() != grid.cell_count() ||
        scene.object_scores.rows() != grid.cell_count()) {
      throw Error("scene '" + grid.scene_id() +
                  "' features do not cover every cell");
    }
    if (!out.empty() &&
        (scene.scene_scores.cols() != out.front().scene_scores.size() ||
         scene.object_scores.cols() != out.front().object_scores.size())) {
      throw Error("scenes disagree on feature dimensions");
    }
    for (int i = 0; i < grid.cell_count(); ++i) {
      const Cell cell = grid.cell_at(i);
      LocationFeatures loc;
      loc.scene = s;
      loc.position = Eigen::Vector2d(cell.x + 0.5, cell.y + 0.5);
      loc.scene_scores = scene.scene_scores.row(i).transpose();
      loc.object_scores = scene.object_scores.row(i).transpose();
      loc.has_object = (loc.object_scores.array() > 0.0).any();
      out.push_back(std::move(loc));
    }
  }
  return out;
}

}  // namespace actionmap
