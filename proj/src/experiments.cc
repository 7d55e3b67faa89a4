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

#include "actionmap/experiments.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>
#include <tuple>

#include "actionmap/error.h"
#include "actionmap/io.h"
#include "actionmap/synthetic.h"

namespace actionmap {
namespace {

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Runs sharing these values share the Gram matrix.
using GramKey = std::tuple<double, double, double, double, double>;

GramKey gram_key(const KernelConfig& cfg) {
  const KernelWeights w = kernel_weights(cfg);
  return {w.spatial, w.scene, w.object, w.scene > 0 ? cfg.gamma_p : 0.0,
          w.object > 0 ? cfg.gamma_o : 0.0};
}

Eigen::MatrixXd stack_rows(const std::vector<Scene>& scenes,
                           Eigen::MatrixXd Scene::*member) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const Scene& s : scenes) {
    rows += (s.*member).rows();
    cols = (s.*member).cols();
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index r = 0;
  for (const Scene& s : scenes) {
    if ((s.*member).cols() != cols) {
      throw Error("scenes disagree on the feature dimension");
    }
    out.middleRows(r, (s.*member).rows()) = s.*member;
    r += (s.*member).rows();
  }
  return out;
}

std::vector<bool> explored_rows(const std::vector<Scene>& scenes,
                                const GlobalIndex& index) {
  std::vector<bool> out(index.size());
  for (int row = 0; row < index.size(); ++row) {
    const auto& e = index.entry(row);
    out[row] = scenes[e.scene].grid.explored(e.cell);
  }
  return out;
}

void evaluate_into(RunRecord& record, const Eigen::MatrixXd& map,
                   const GlobalIndex& index, const ExperimentSetup& setup) {
  const std::vector<int> eval = setup.evaluated_scenes();
  record.result =
      evaluate_action_map(map, index, setup.scenes, eval, setup.view);
  record.per_scene.clear();
  for (int s : eval) {
    record.per_scene.push_back(
        evaluate_action_map(map, index, setup.scenes, {s}, setup.view));
  }
}

SummaryMetrics mean_summary(const std::vector<SummaryMetrics>& runs) {
  return cross_run_stats(runs).mean;
}

}  // namespace

void GridSpec::validate() const {
  if (alphas.empty() || lambdas.empty() || gammas.empty() ||
      variants.empty()) {
    throw Error("parameter grid has an empty axis");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error("grid alpha outside [0, 1]");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw Error("grid lambda must be >= 0");
  }
  for (double g : gammas) {
    if (!(g > 0.0)) throw Error("grid gamma must be > 0");
  }
}

std::vector<int> ExperimentSetup::evaluated_scenes() const {
  if (!eval_scenes.empty()) return eval_scenes;
  std::vector<int> all(scenes.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return all;
}

CrossRunStats cross_run_stats(const std::vector<SummaryMetrics>& runs) {
  CrossRunStats stats;
  stats.runs = static_cast<int>(runs.size());
  if (runs.empty()) return stats;
  std::vector<double> max(4, -1.0), sum(4, 0.0), sq(4, 0.0);
  for (const SummaryMetrics& r : runs) {
    const auto v = r.as_vector();
    for (int k = 0; k < 4; ++k) {
      max[k] = std::max(max[k], v[k]);
      sum[k] += v[k];
    }
  }
  std::vector<double> mean(4);
  for (int k = 0; k < 4; ++k) mean[k] = sum[k] / stats.runs;
  for (const SummaryMetrics& r : runs) {
    const auto v = r.as_vector();
    for (int k = 0; k < 4; ++k) sq[k] += (v[k] - mean[k]) * (v[k] - mean[k]);
  }
  std::vector<double> stdev(4);
  for (int k = 0; k < 4; ++k) stdev[k] = std::sqrt(sq[k] / stats.runs);
  stats.max = SummaryMetrics::from_vector(max);
  stats.mean = SummaryMetrics::from_vector(mean);
  stats.stdev = SummaryMetrics::from_vector(stdev);
  return stats;
}

const CrossRunStats& GridReport::stats_for(KernelVariant variant) const {
  for (size_t i = 0; i < variants.size(); ++i) {
    if (variants[i] == variant) return stats[i];
  }
  throw Error("variant " + to_string(variant) + " is not part of the report");
}

KernelConfig run_kernel(const KernelConfig& base, KernelVariant variant,
                        double alpha, double gamma) {
  KernelConfig cfg = base;
  cfg.variant = variant;
  cfg.alpha = alpha;
  cfg.gamma_p = gamma;
  cfg.gamma_o = gamma;
  cfg.validate();
  return cfg;
}

void quantize_factors(FactorPair& factors) {
  factors.u = factors.u.unaryExpr([](double v) { return io::quantize(v); });
  factors.v = factors.v.unaryExpr([](double v) { return io::quantize(v); });
}

Eigen::MatrixXd action_map_from_factors(const FactorPair& factors) {
  return normalize_columns(predict(factors)).unaryExpr([](double v) {
    return io::quantize(v);
  });
}

ActionMapFit fit_action_map(const std::vector<Scene>& scenes,
                            const std::vector<bool>& activity_observed,
                            const KernelConfig& kernel,
                            const SolverParams& solver) {
  ActionMapFit out;
  const auto grids = grids_of(scenes);
  out.index = stack_scenes(grids);
  const ActionMatrixBundle bundle =
      build_weight_matrix(grids, out.index, activity_observed);
  const auto features = stacked_features(scenes);
  const GramMatrix k_u = build_gram_matrix(features, kernel);
  out.fit = fit(bundle, k_u, GramMatrix::identity(bundle.cols()), solver);
  quantize_factors(out.fit.factors);
  out.map = action_map_from_factors(out.fit.factors);
  return out;
}

GridReport run_parameter_grid(const ExperimentSetup& setup,
                              const GridSpec& grid) {
  grid.validate();
  setup.solver.validate();
  GridReport report;
  report.variants = grid.variants;

  for (KernelVariant variant : grid.variants) {
    for (double alpha : grid.alphas) {
      for (double lambda : grid.lambdas) {
        for (double gamma : grid.gammas) {
          RunRecord r;
          r.variant = variant;
          r.alpha = alpha;
          r.lambda = lambda;
          r.gamma = gamma;
          report.runs.push_back(r);
        }
      }
    }
  }

  const auto grids = grids_of(setup.scenes);
  const GlobalIndex index = stack_scenes(grids);
  const ActionMatrixBundle bundle =
      build_weight_matrix(grids, index, setup.activity_observed);
  const auto features = stacked_features(setup.scenes);
  const GramMatrix k_v = GramMatrix::identity(bundle.cols());

  // Group runs by Gram matrix, then by lambda; duplicates reuse one fit.
  std::map<GramKey, std::map<double, std::vector<int>>> groups;
  std::vector<std::string> config_errors(report.runs.size());
  for (size_t i = 0; i < report.runs.size(); ++i) {
    const RunRecord& r = report.runs[i];
    try {
      const KernelConfig cfg =
          run_kernel(setup.kernel, r.variant, r.alpha, r.gamma);
      groups[gram_key(cfg)][r.lambda].push_back(static_cast<int>(i));
    } catch (const std::exception& e) {
      config_errors[i] = e.what();
    }
  }
  for (size_t i = 0; i < report.runs.size(); ++i) {
    if (!config_errors[i].empty()) {
      report.runs[i].ok = false;
      report.runs[i].error = config_errors[i];
    }
  }

  std::vector<const std::map<double, std::vector<int>>*> work;
  for (const auto& [key, by_lambda] : groups) work.push_back(&by_lambda);

  parallel_for(static_cast<int>(work.size()), setup.threads, [&](int w) {
    const auto& by_lambda = *work[w];
    const RunRecord& first = report.runs[by_lambda.begin()->second.front()];
    GramMatrix k_u;
    std::string gram_error;
    try {
      k_u = build_gram_matrix(
          features,
          run_kernel(setup.kernel, first.variant, first.alpha, first.gamma));
    } catch (const std::exception& e) {
      gram_error = e.what();
    }
    for (const auto& [lambda, members] : by_lambda) {
      RunRecord result = report.runs[members.front()];
      if (!gram_error.empty()) {
        result.ok = false;
        result.error = gram_error;
      } else {
        try {
          SolverParams params = setup.solver;
          params.lambda = lambda;
          FitResult f = fit(bundle, k_u, k_v, params);
          result.iterations = f.iterations;
          result.final_objective = f.trace.back();
          quantize_factors(f.factors);
          evaluate_into(result, action_map_from_factors(f.factors), index,
                        setup);
        } catch (const std::exception& e) {
          result.ok = false;
          result.error = e.what();
        }
      }
      for (int m : members) {
        RunRecord& dst = report.runs[m];
        const RunRecord labels = dst;
        dst = result;
        dst.variant = labels.variant;
        dst.alpha = labels.alpha;
        dst.lambda = labels.lambda;
        dst.gamma = labels.gamma;
      }
    }
  });

  for (KernelVariant variant : grid.variants) {
    std::vector<SummaryMetrics> ok;
    for (const RunRecord& r : report.runs) {
      if (r.variant == variant && r.ok) ok.push_back(r.result.summary);
    }
    report.stats.push_back(cross_run_stats(ok));
  }
  return report;
}

std::vector<MethodStats> run_transfer(const ExperimentSetup& setup,
                                      const CategoryActivityMap& mapping,
                                      const GridSpec& grid) {
  if (setup.activity_observed.size() != setup.scenes.size()) {
    throw Error("transfer needs an observed flag for every scene");
  }
  const auto grids = grids_of(setup.scenes);
  const GlobalIndex index = stack_scenes(grids);
  const std::vector<int> eval = setup.evaluated_scenes();
  std::vector<MethodStats> rows;

  const Eigen::MatrixXd objects = stack_rows(setup.scenes, &Scene::object_scores);
  const Eigen::MatrixXd det = detection_action_map(objects, mapping);
  rows.push_back({"Det.", cross_run_stats({evaluate_action_map(
                              det, index, setup.scenes, eval, setup.view)
                                               .summary})});

  const ActionMatrixBundle bundle =
      build_weight_matrix(grids, index, setup.activity_observed);
  const Eigen::MatrixXd nmf = augmented_wnmf(
      bundle, stack_rows(setup.scenes, &Scene::scene_scores), objects,
      explored_rows(setup.scenes, index), setup.solver);
  rows.push_back({"NMF", cross_run_stats({evaluate_action_map(
                             nmf, index, setup.scenes, eval, setup.view)
                                              .summary})});

  const GridReport report = run_parameter_grid(setup, grid);
  for (size_t v = 0; v < report.variants.size(); ++v) {
    rows.push_back({to_string(report.variants[v]), report.stats[v]});
  }
  return rows;
}

std::vector<ElapsePoint> run_elapse(const ExperimentSetup& setup,
                                    const GridSpec& grid,
                                    const std::vector<double>& fractions,
                                    uint64_t seed) {
  std::vector<ElapsePoint> points;
  for (double fraction : fractions) {
    ExperimentSetup subset = setup;
    ElapsePoint point;
    point.fraction = fraction;
    for (size_t s = 0; s < subset.scenes.size(); ++s) {
      const auto demos = synthetic::sample_demonstrations(
          setup.scenes[s].grid.demonstrations(), fraction, seed + s);
      point.demonstrations += static_cast<int>(demos.size());
      subset.scenes[s] = synthetic::with_demonstrations(setup.scenes[s], demos);
    }
    const GridReport report = run_parameter_grid(subset, grid);
    std::vector<SummaryMetrics> ok;
    for (const RunRecord& r : report.runs) {
      if (!r.ok) continue;
      ok.push_back(r.result.summary);
      if (point.mean_f1_per_activity.empty()) {
        point.mean_f1_per_activity.assign(r.result.mean_f1.size(), 0.0);
      }
      for (size_t a = 0; a < r.result.mean_f1.size(); ++a) {
        point.mean_f1_per_activity[a] += r.result.mean_f1[a];
      }
    }
    for (double& v : point.mean_f1_per_activity) v /= std::max<size_t>(1, ok.size());
    point.stats = cross_run_stats(ok);
    points.push_back(std::move(point));
  }
  return points;
}

JointComparison run_joint_vs_single(const ExperimentSetup& setup,
                                    const GridSpec& grid) {
  JointComparison out;
  const std::vector<int> eval = setup.evaluated_scenes();
  const GridReport joint = run_parameter_grid(setup, grid);
  for (size_t k = 0; k < eval.size(); ++k) {
    std::vector<SummaryMetrics> ok;
    for (const RunRecord& r : joint.runs) {
      if (r.ok) ok.push_back(r.per_scene[k].summary);
    }
    out.joint.push_back(mean_summary(ok));

    ExperimentSetup alone = setup;
    alone.scenes = {setup.scenes[eval[k]]};
    alone.activity_observed.clear();
    if (!setup.activity_observed.empty()) {
      alone.activity_observed = {setup.activity_observed[eval[k]]};
    }
    alone.eval_scenes = {0};
    const GridReport single = run_parameter_grid(alone, grid);
    std::vector<SummaryMetrics> single_ok;
    for (const RunRecord& r : single.runs) {
      if (r.ok) single_ok.push_back(r.result.summary);
    }
    out.single.push_back(mean_summary(single_ok));
  }
  return out;
}

}  // namespace actionmap
