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

#ifndef ACTIONMAP_EXPERIMENTS_H_
#define ACTIONMAP_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actionmap/baselines.h"
#include "actionmap/evaluation.h"
#include "actionmap/rwnmf.h"
#include "actionmap/scene_model.h"
#include "actionmap/side_info.h"

namespace actionmap {

struct GridSpec {
  std::vector<double> alphas = {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  std::vector<double> lambdas = {1e-3, 1e-2};
  // Shared by both chi-squared kernels.
  std::vector<double> gammas = {100.0, 1000.0};
  std::vector<KernelVariant> variants = {KernelVariant::kS, KernelVariant::kSO,
                                         KernelVariant::kSP,
                                         KernelVariant::kSOP};

  int tuple_count() const {
    return static_cast<int>(alphas.size() * lambdas.size() * gammas.size());
  }
  void validate() const;
};

struct ExperimentSetup {
  std::vector<Scene> scenes;
  // Per scene; false marks a novel scene whose demonstrations are ignored.
  // Empty means every scene is observed.
  std::vector<bool> activity_observed;
  // Scenes pooled for evaluation; empty means all.
  std::vector<int> eval_scenes;
  SolverParams solver;
  // Base kernel settings; alpha, gammas and variant are overridden per run.
  KernelConfig kernel;
  ViewParams view;
  int threads = 1;

  std::vector<int> evaluated_scenes() const;
};

struct RunRecord {
  KernelVariant variant = KernelVariant::kSOP;
  double alpha = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  bool ok = true;
  std::string error;
  int iterations = 0;
  double final_objective = 0.0;
  EvalResult result;                 // pooled over the evaluated scenes
  std::vector<EvalResult> per_scene;  // follows evaluated_scenes()
};

struct CrossRunStats {
  int runs = 0;
  SummaryMetrics max;
  SummaryMetrics mean;
  SummaryMetrics stdev;  // population standard deviation
};

CrossRunStats cross_run_stats(const std::vector<SummaryMetrics>& runs);

struct GridReport {
  std::vector<RunRecord> runs;
  std::vector<KernelVariant> variants;
  std::vector<CrossRunStats> stats;  // one per variant, successful runs only

  const CrossRunStats& stats_for(KernelVariant variant) const;
};

// Kernel for one run: the base config with the grid values substituted.
KernelConfig run_kernel(const KernelConfig& base, KernelVariant variant,
                        double alpha, double gamma);

// Rounds factors to the precision of the text formats so that a fit saved
// to disk and reloaded predicts exactly the same map.
void quantize_factors(FactorPair& factors);
// Column-normalized U V^T, rounded like the text formats.
Eigen::MatrixXd action_map_from_factors(const FactorPair& factors);

struct ActionMapFit {
  GlobalIndex index;
  FitResult fit;        // factors already quantized
  Eigen::MatrixXd map;  // action_map_from_factors(fit.factors)
};

ActionMapFit fit_action_map(const std::vector<Scene>& scenes,
                            const std::vector<bool>& activity_observed,
                            const KernelConfig& kernel,
                            const SolverParams& solver);

// Evaluates one fit per (variant, alpha, lambda, gamma). Failed runs are
// recorded and skipped by the statistics.
GridReport run_parameter_grid(const ExperimentSetup& setup,
                              const GridSpec& grid);

struct MethodStats {
  std::string method;
  CrossRunStats stats;
};

// Rows Det., NMF, then one per grid variant. Scenes flagged unobserved in
// `setup.activity_observed` are the novel targets.
std::vector<MethodStats> run_transfer(const ExperimentSetup& setup,
                                      const CategoryActivityMap& mapping,
                                      const GridSpec& grid);

struct ElapsePoint {
  double fraction = 0.0;
  int demonstrations = 0;
  CrossRunStats stats;
  std::vector<double> mean_f1_per_activity;  // averaged over runs
};

// Replaces each scene's demonstrations by a seeded prefix-consistent subset
// for each fraction and runs the grid.
std::vector<ElapsePoint> run_elapse(const ExperimentSetup& setup,
                                    const GridSpec& grid,
                                    const std::vector<double>& fractions,
                                    uint64_t seed);

struct JointComparison {
  // Cross-run means for each evaluated scene.
  std::vector<SummaryMetrics> joint;
  std::vector<SummaryMetrics> single;
};

// Fits all scenes in one matrix and each scene alone, evaluating every
// scene separately.
JointComparison run_joint_vs_single(const ExperimentSetup& setup,
                                    const GridSpec& grid);

}  // namespace actionmap

#endif  // ACTIONMAP_EXPERIMENTS_H_
