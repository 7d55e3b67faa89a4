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

#include "actionmap/rwnmf.h"

#include <cmath>
#include <limits>
#include <random>

#include "actionmap/error.h"

namespace actionmap {
namespace {

void check_shapes(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                  const ActionMatrixBundle& bundle, const GramMatrix& k_u,
                  const GramMatrix& k_v) {
  if (bundle.weights.rows() != bundle.observed.rows() ||
      bundle.weights.cols() != bundle.observed.cols()) {
    throw Error("R and W have different shapes");
  }
  if (u.rows() != bundle.observed.rows() || v.rows() != bundle.observed.cols() ||
      u.cols() != v.cols()) {
    throw Error("factor shapes do not match the action matrix");
  }
  if (k_u.size() != u.rows() || k_v.size() != v.rows()) {
    throw Error("Gram matrix shapes do not match the factors");
  }
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

// Pairwise form; used for the small A x A action graph so that an identity
// K^V contributes exactly zero.
double pairwise_penalty(const Eigen::MatrixXd& x, const GramMatrix& k) {
  double sum = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.rows(); ++j) {
      const double kij = k.coeff(i, j);
      if (kij != 0.0) sum += (x.row(i) - x.row(j)).squaredNorm() * kij;
    }
  }
  return 0.5 * sum;
}

double data_term(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                 const ActionMatrixBundle& bundle) {
  return (bundle.weights.array() *
          (bundle.observed - u * v.transpose()).array())
      .square()
      .sum();
}

// tr(U^T L U) given K U.
double trace_penalty(const Eigen::MatrixXd& u, const Eigen::MatrixXd& ku,
                     const Eigen::VectorXd& degree) {
  return (degree.array() * u.rowwise().squaredNorm().array()).sum() -
         (u.array() * ku.array()).sum();
}

}  // namespace

void SolverParams::validate() const {
  if (rank < 1) throw Error("latent rank must be at least 1");
  if (!(lambda >= 0.0) || !(mu >= 0.0)) {
    throw Error("lambda and mu must be non-negative");
  }
  if (max_iters < 0) throw Error("max_iters must be non-negative");
  if (!(rel_tol > 0.0)) throw Error("rel_tol must be positive");
  if (!(epsilon_stab >= 0.0)) throw Error("epsilon_stab must be >= 0");
}

ActionMatrixBundle build_weight_matrix(
    const std::vector<const SceneGrid*>& scenes, const GlobalIndex& index,
    const std::vector<bool>& activity_observed) {
  if (!activity_observed.empty() && activity_observed.size() != scenes.size()) {
    throw Error("activity_observed must have one flag per scene");
  }
  const int m = index.size();
  const int a = scenes.empty() ? 0 : scenes.front()->activity_count();
  ActionMatrixBundle bundle;
  bundle.observed = Eigen::MatrixXd::Zero(m, a);
  bundle.weights = Eigen::MatrixXd::Zero(m, a);
  bundle.mask.setConstant(m, a, false);

  std::vector<int> class_counts(a, 0);
  std::vector<std::pair<int, int>> activity_entries;  // (row, activity)
  std::vector<int> empty_rows;
  for (int s = 0; s < static_cast<int>(scenes.size()); ++s) {
    if (!activity_observed.empty() && !activity_observed[s]) continue;
    const SceneGrid& grid = *scenes[s];
    std::vector<char> has_demo(grid.cell_count(), 0);
    for (const auto& [key, value] : grid.observed_entries()) {
      const auto [cell, activity] = key;
      const int row = index.offset(s) + cell;
      bundle.observed(row, activity) = value;
      bundle.mask(row, activity) = true;
      ++class_counts[activity];
      activity_entries.emplace_back(row, activity);
      has_demo[cell] = 1;
    }
    for (int cell = 0; cell < grid.cell_count(); ++cell) {
      if (has_demo[cell] || !grid.explored(grid.cell_at(cell))) continue;
      empty_rows.push_back(index.offset(s) + cell);
    }
  }
  for (const auto& [row, activity] : activity_entries) {
    bundle.weights(row, activity) = 1.0 / class_counts[activity];
  }
  const int empty_count = static_cast<int>(empty_rows.size()) * a;
  for (int row : empty_rows) {
    bundle.mask.row(row).setConstant(true);
    bundle.weights.row(row).setConstant(1.0 / empty_count);
  }
  return bundle;
}

double laplacian_penalty(const Eigen::MatrixXd& x, const GramMatrix& k) {
  if (k.size() != x.rows()) throw Error("Gram matrix shape mismatch");
  return trace_penalty(x, k.multiply(x), k.degree());
}

double objective(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                 const ActionMatrixBundle& bundle, const GramMatrix& k_u,
                 const GramMatrix& k_v, double lambda, double mu) {
  check_shapes(u, v, bundle, k_u, k_v);
  if (!all_finite(u) || !all_finite(v) || !all_finite(bundle.observed) ||
      !all_finite(bundle.weights)) {
    throw Error("objective received non-finite input");
  }
  double j = data_term(u, v, bundle);
  if (lambda != 0.0) j += lambda * laplacian_penalty(u, k_u);
  if (mu != 0.0) j += mu * pairwise_penalty(v, k_v);
  return j;
}

namespace {

struct StepCache {
  Eigen::ArrayXXd w2;   // W o W
  Eigen::MatrixXd w2r;  // W o W o R
};

StepCache make_cache(const ActionMatrixBundle& bundle) {
  StepCache cache;
  cache.w2 = bundle.weights.array().square();
  cache.w2r = (cache.w2 * bundle.observed.array()).matrix();
  return cache;
}

// Updates U using the supplied K U, then V; returns K U for the new U.
Eigen::MatrixXd step_with_cache(Eigen::MatrixXd& u, Eigen::MatrixXd& v,
                                const StepCache& cache, const GramMatrix& k_u,
                                const GramMatrix& k_v,
                                const SolverParams& params,
                                const Eigen::MatrixXd& ku) {
  const double eps = params.epsilon_stab;
  {
    const Eigen::MatrixXd fitted =
        (cache.w2 * (u * v.transpose()).array()).matrix();
    Eigen::ArrayXXd num = (cache.w2r * v).array();
    Eigen::ArrayXXd den = (fitted * v).array();
    if (params.lambda != 0.0) {
      num += params.lambda * ku.array();
      den += params.lambda * (u.array().colwise() * k_u.degree().array());
    }
    u.array() *= num / (den + eps);
  }
  Eigen::MatrixXd ku_next;
  if (params.lambda != 0.0) ku_next = k_u.multiply(u);
  {
    const Eigen::MatrixXd fitted =
        (cache.w2 * (u * v.transpose()).array()).matrix();
    Eigen::ArrayXXd num = (cache.w2r.transpose() * u).array();
    Eigen::ArrayXXd den = (fitted.transpose() * u).array();
    if (params.mu != 0.0) {
      num += params.mu * k_v.multiply(v).array();
      den += params.mu * (v.array().colwise() * k_v.degree().array());
    }
    v.array() *= num / (den + eps);
  }
  if (!all_finite(u) || !all_finite(v)) {
    throw Error("multiplicative update produced non-finite factors");
  }
  return ku_next;
}

double objective_cached(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                        const ActionMatrixBundle& bundle, const GramMatrix& k_u,
                        const GramMatrix& k_v, const SolverParams& params,
                        const Eigen::MatrixXd& ku) {
  double j = data_term(u, v, bundle);
  if (params.lambda != 0.0) {
    j += params.lambda * trace_penalty(u, ku, k_u.degree());
  }
  if (params.mu != 0.0) j += params.mu * pairwise_penalty(v, k_v);
  return j;
}

}  // namespace

void multiplicative_step(Eigen::MatrixXd& u, Eigen::MatrixXd& v,
                         const ActionMatrixBundle& bundle,
                         const GramMatrix& k_u, const GramMatrix& k_v,
                         const SolverParams& params) {
  check_shapes(u, v, bundle, k_u, k_v);
  const StepCache cache = make_cache(bundle);
  Eigen::MatrixXd ku;
  if (params.lambda != 0.0) ku = k_u.multiply(u);
  step_with_cache(u, v, cache, k_u, k_v, params, ku);
}

FactorPair initialize_factors(int rows, int cols, const SolverParams& params) {
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> draw(0.1, 1.1);
  FactorPair f{Eigen::MatrixXd(rows, params.rank),
               Eigen::MatrixXd(cols, params.rank)};
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < params.rank; ++k) f.u(i, k) = draw(rng);
  }
  for (int i = 0; i < cols; ++i) {
    for (int k = 0; k < params.rank; ++k) f.v(i, k) = draw(rng);
  }
  return f;
}

FitResult fit(const ActionMatrixBundle& bundle, const GramMatrix& k_u,
              const GramMatrix& k_v, const SolverParams& params) {
  params.validate();
  FitResult result;
  result.factors = initialize_factors(bundle.rows(), bundle.cols(), params);
  auto& u = result.factors.u;
  auto& v = result.factors.v;
  check_shapes(u, v, bundle, k_u, k_v);
  if (!all_finite(bundle.observed) || !all_finite(bundle.weights)) {
    throw Error("action matrix contains non-finite values");
  }

  const StepCache cache = make_cache(bundle);
  Eigen::MatrixXd ku;
  if (params.lambda != 0.0) ku = k_u.multiply(u);
  double previous = objective_cached(u, v, bundle, k_u, k_v, params, ku);
  result.trace.push_back(previous);

  for (int it = 0; it < params.max_iters; ++it) {
    ku = step_with_cache(u, v, cache, k_u, k_v, params, ku);
    const double current = objective_cached(u, v, bundle, k_u, k_v, params, ku);
    result.trace.push_back(current);
    result.iterations = it + 1;
    if (previous <= 0.0 || (previous - current) / previous < params.rel_tol) {
      result.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

Eigen::MatrixXd predict(const FactorPair& factors) {
  return factors.u * factors.v.transpose();
}

Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& map) {
  Eigen::MatrixXd out = map;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double peak = out.col(c).maxCoeff();
    if (peak > 0.0) {
      out.col(c) /= peak;
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

}  // namespace actionmap
