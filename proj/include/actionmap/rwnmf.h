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

#ifndef ACTIONMAP_RWNMF_H_
#define ACTIONMAP_RWNMF_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "actionmap/scene_model.h"
#include "actionmap/side_info.h"

namespace actionmap {

// Observed matrix R, weights W and the observed-entry mask, all M x A.
struct ActionMatrixBundle {
  Eigen::MatrixXd observed;
  Eigen::MatrixXd weights;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;

  int rows() const { return static_cast<int>(observed.rows()); }
  int cols() const { return static_cast<int>(observed.cols()); }
};

struct FactorPair {
  Eigen::MatrixXd u;  // M x D
  Eigen::MatrixXd v;  // A x D

  int rank() const { return static_cast<int>(u.cols()); }
};

struct SolverParams {
  int rank = 6;
  double lambda = 1e-3;
  double mu = 0.0;
  int max_iters = 2000;
  double rel_tol = 1e-6;
  double epsilon_stab = 1e-12;
  uint64_t seed = 1;

  void validate() const;
};

// Class-balanced weights. Each demonstrated (location, activity) entry gets
// 1/n_c, every entry of an explored location without demonstrations gets
// 1/n_z, all else 0. Scenes whose flag in `activity_observed` is false
// contribute no observations (novel scenes); an empty vector means all true.
ActionMatrixBundle build_weight_matrix(
    const std::vector<const SceneGrid*>& scenes, const GlobalIndex& index,
    const std::vector<bool>& activity_observed = {});

// tr(X^T (Diag(deg) - K) X), i.e. half the pairwise sum
// sum_ij |x_i - x_j|^2 K_ij.
double laplacian_penalty(const Eigen::MatrixXd& x, const GramMatrix& k);

// |W o (R - U V^T)|_F^2 + lambda tr(U^T L_U U) + mu tr(V^T L_V V).
double objective(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                 const ActionMatrixBundle& bundle, const GramMatrix& k_u,
                 const GramMatrix& k_v, double lambda, double mu);

// One regularized multiplicative update, U first then V with the new U.
// The squared weights W o W enter the update since the loss squares W.
void multiplicative_step(Eigen::MatrixXd& u, Eigen::MatrixXd& v,
                         const ActionMatrixBundle& bundle,
                         const GramMatrix& k_u, const GramMatrix& k_v,
                         const SolverParams& params);

FactorPair initialize_factors(int rows, int cols, const SolverParams& params);

struct FitResult {
  FactorPair factors;
  std::vector<double> trace;  // J before the first step, then after each
  int iterations = 0;
  bool converged = false;
};

FitResult fit(const ActionMatrixBundle& bundle, const GramMatrix& k_u,
              const GramMatrix& k_v, const SolverParams& params);

// R_hat = U V^T.
Eigen::MatrixXd predict(const FactorPair& factors);

// Each column divided by its maximum; all-zero columns stay zero.
Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& map);

}  // namespace actionmap

#endif  // ACTIONMAP_RWNMF_H_
