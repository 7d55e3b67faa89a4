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
#include "actionmap/rwnmf.h"
#include "actionmap/scene_model.h"
#include "fixtures.h"

namespace actionmap {
namespace {

using testing::make_random_instance;

// Element-wise loop evaluation of the objective with the pairwise penalty.
double objective_oracle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                        const ActionMatrixBundle& b, const Eigen::MatrixXd& ku,
                        const Eigen::MatrixXd& kv, double lambda, double mu) {
  double j = 0.0;
  for (int i = 0; i < b.rows(); ++i) {
    for (int a = 0; a < b.cols(); ++a) {
      double r = 0.0;
      for (int d = 0; d < u.cols(); ++d) r += u(i, d) * v(a, d);
      const double e = b.weights(i, a) * (b.observed(i, a) - r);
      j += e * e;
    }
  }
  auto pairwise = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& k) {
    double s = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      for (int l = 0; l < x.rows(); ++l) {
        s += (x.row(i) - x.row(l)).squaredNorm() * k(i, l);
      }
    }
    return 0.5 * s;
  };
  return j + lambda * pairwise(u, ku) + mu * pairwise(v, kv);
}

// Standard weighted NMF updates (squared weights), written out entry-wise.
void unregularized_step_oracle(Eigen::MatrixXd& u, Eigen::MatrixXd& v,
                               const ActionMatrixBundle& b, double eps) {
  const int m = b.rows(), a = b.cols(), d = static_cast<int>(u.cols());
  Eigen::MatrixXd w2 = b.weights.cwiseProduct(b.weights);
  Eigen::MatrixXd fit = u * v.transpose();
  Eigen::MatrixXd nu = u;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) {
      double num = 0.0, den = 0.0;
      for (int c = 0; c < a; ++c) {
        num += w2(i, c) * b.observed(i, c) * v(c, k);
        den += w2(i, c) * fit(i, c) * v(c, k);
      }
      nu(i, k) = u(i, k) * num / (den + eps);
    }
  }
  u = nu;
  fit = u * v.transpose();
  Eigen::MatrixXd nv = v;
  for (int c = 0; c < a; ++c) {
    for (int k = 0; k < d; ++k) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < m; ++i) {
        num += w2(i, c) * b.observed(i, c) * u(i, k);
        den += w2(i, c) * fit(i, c) * u(i, k);
      }
      nv(c, k) = v(c, k) * num / (den + eps);
    }
  }
  v = nv;
}

TEST_CASE("weight matrix balances classes") {
  SceneGrid g("s", 3, 2, 0.25, ActivityVocabulary({"sit", "type", "read"}));
  g.add_demonstration({{0, 0}, 0, 1.0});
  g.add_demonstration({{1, 0}, 0, 1.0});
  g.add_demonstration({{2, 0}, 1, 0.7});
  g.mark_explored({0, 1});
  const GlobalIndex idx = stack_scenes({&g});
  const ActionMatrixBundle b = build_weight_matrix({&g}, idx);
  CHECK(b.weights(0, 0) == 0.5);
  CHECK(b.weights(1, 0) == 0.5);
  CHECK(b.weights(2, 1) == 1.0);
  CHECK(b.observed(2, 1) == 0.7);
  for (int a = 0; a < 3; ++a) {
    CHECK(b.weights(3, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(b.mask(3, a));
    CHECK(b.observed(3, a) == 0.0);
    CHECK(b.weights(4, a) == 0.0);
    CHECK_FALSE(b.mask(5, a));
  }
  CHECK(b.weights(0, 1) == 0.0);
  CHECK_FALSE(b.mask(0, 1));

  const ActionMatrixBundle novel = build_weight_matrix({&g}, idx, {false});
  CHECK(novel.weights.isZero());
}

TEST_CASE("weight matrix without demonstrations or exploration") {
  SceneGrid g("s", 2, 2, 0.25);
  const GlobalIndex idx = stack_scenes({&g});
  CHECK(build_weight_matrix({&g}, idx).weights.isZero());

  g.mark_explored({1, 1});
  g.mark_explored({0, 1});
  const ActionMatrixBundle b = build_weight_matrix({&g}, idx);
  CHECK(b.weights.row(0).isZero());
  CHECK(b.weights.row(2).isConstant(1.0 / 12.0));
  CHECK(b.weights.row(3).isConstant(1.0 / 12.0));
}

TEST_CASE("objective matches the loop oracle") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = make_random_instance(seed, 25, 4);
    SolverParams p;
    p.rank = 3;
    p.seed = seed;
    FactorPair f = initialize_factors(25, 4, p);
    Eigen::MatrixXd kv = Eigen::MatrixXd::Constant(4, 4, 0.3);
    kv.diagonal().setOnes();
    const GramMatrix gv(kv);
    const double j = objective(f.u, f.v, inst.bundle, inst.k_u, gv, 0.7, 0.2);
    const double oracle = objective_oracle(f.u, f.v, inst.bundle,
                                           inst.k_u.to_dense(), kv, 0.7, 0.2);
    CHECK(std::abs(j - oracle) <= 1e-10 * std::max(1.0, oracle));
  }

  auto inst = make_random_instance(9, 10, 3);
  const GramMatrix id = GramMatrix::identity(3);
  const Eigen::MatrixXd u0 = Eigen::MatrixXd::Zero(10, 2);
  const Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(3, 2);
  const double wr =
      inst.bundle.weights.cwiseProduct(inst.bundle.observed).squaredNorm();
  CHECK(objective(u0, v0, inst.bundle, inst.k_u, id, 0.0, 0.0) == wr);

  // The identity K_V carries no penalty whatever mu is.
  SolverParams p;
  p.rank = 2;
  const FactorPair f = initialize_factors(10, 3, p);
  CHECK(objective(f.u, f.v, inst.bundle, inst.k_u, id, 0.5, 0.0) ==
        objective(f.u, f.v, inst.bundle, inst.k_u, id, 0.5, 3.0));
}

TEST_CASE("exact factorization has zero objective") {
  SolverParams p;
  p.rank = 2;
  const FactorPair f = initialize_factors(8, 3, p);
  ActionMatrixBundle b;
  b.observed = f.u * f.v.transpose();
  b.weights = Eigen::MatrixXd::Ones(8, 3);
  b.mask.setConstant(8, 3, true);
  CHECK(objective(f.u, f.v, b, GramMatrix::identity(8),
                  GramMatrix::identity(3), 0.0, 0.0) == 0.0);
}

TEST_CASE("laplacian trace form equals half the pairwise sum") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = make_random_instance(seed, 30, 4);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    Eigen::MatrixXd x(30, 5);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = uni(rng);
    const Eigen::MatrixXd k = inst.k_u.to_dense();
    double pairwise = 0.0;
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < 30; ++j) {
        pairwise += (x.row(i) - x.row(j)).squaredNorm() * k(i, j);
      }
    }
    CHECK(std::abs(0.5 * pairwise - laplacian_penalty(x, inst.k_u)) <= 1e-8);
  }
}

TEST_CASE("unregularized step equals plain weighted NMF updates") {
  auto inst = make_random_instance(4, 20, 5);
  SolverParams p;
  p.rank = 3;
  p.lambda = 0.0;
  p.mu = 0.0;
  FactorPair f = initialize_factors(20, 5, p);
  Eigen::MatrixXd u = f.u, v = f.v;
  multiplicative_step(f.u, f.v, inst.bundle, inst.k_u,
                      GramMatrix::identity(5), p);
  unregularized_step_oracle(u, v, inst.bundle, p.epsilon_stab);
  CHECK((f.u - u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f.v - v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single steps never increase the objective") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = make_random_instance(seed, 40, 6);
    Eigen::MatrixXd kv = Eigen::MatrixXd::Constant(6, 6, 0.2);
    kv.diagonal().setOnes();
    const GramMatrix gv(kv);
    SolverParams p;
    p.lambda = 0.3;
    p.mu = 0.1;
    p.seed = seed;
    FactorPair f = initialize_factors(40, 6, p);
    double j = objective(f.u, f.v, inst.bundle, inst.k_u, gv, p.lambda, p.mu);
    for (int it = 0; it < 20; ++it) {
      multiplicative_step(f.u, f.v, inst.bundle, inst.k_u, gv, p);
      const double next =
          objective(f.u, f.v, inst.bundle, inst.k_u, gv, p.lambda, p.mu);
      REQUIRE(next <= j * (1.0 + 1e-9));
      REQUIRE((f.u.array() >= 0.0).all());
      REQUIRE((f.v.array() >= 0.0).all());
      j = next;
    }
  }
}

TEST_CASE("fit recovers a noiseless rank-one matrix and is reproducible") {
  Eigen::VectorXd u(12), v(4);
  for (int i = 0; i < 12; ++i) u[i] = 0.2 + 0.1 * i;
  v << 0.5, 1.0, 1.5, 0.25;
  ActionMatrixBundle b;
  b.observed = u * v.transpose();
  b.weights = Eigen::MatrixXd::Ones(12, 4);
  b.mask.setConstant(12, 4, true);
  SolverParams p;
  p.rank = 1;
  p.lambda = 0.0;
  p.rel_tol = 1e-14;
  p.max_iters = 5000;
  const GramMatrix ku = GramMatrix::identity(12), kv = GramMatrix::identity(4);
  const FitResult r = fit(b, ku, kv, p);
  const double err =
      (predict(r.factors) - b.observed).norm() / b.observed.norm();
  CHECK(err < 1e-3);
  const FitResult again = fit(b, ku, kv, p);
  CHECK(again.trace == r.trace);
  // Near J = 0 rounding in the residuals dominates; allow that floor.
  const double floor = 1e-20 * b.observed.squaredNorm();
  for (size_t i = 1; i < r.trace.size(); ++i) {
    REQUIRE(r.trace[i] <= r.trace[i - 1] * (1.0 + 1e-9) + floor);
  }

  // A minimizer stays put.
  FactorPair fixed = r.factors;
  const FactorPair before = fixed;
  multiplicative_step(fixed.u, fixed.v, b, ku, kv, p);
  CHECK((fixed.u - before.u).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((fixed.v - before.v).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("scaling weights scales the data term quadratically") {
  auto inst = make_random_instance(3, 15, 3);
  SolverParams p;
  p.rank = 2;
  const FactorPair f = initialize_factors(15, 3, p);
  ActionMatrixBundle scaled = inst.bundle;
  scaled.weights *= 3.0;
  const GramMatrix kv = GramMatrix::identity(3);
  const double j1 = objective(f.u, f.v, inst.bundle, inst.k_u, kv, 0.0, 0.0);
  const double j3 = objective(f.u, f.v, scaled, inst.k_u, kv, 0.0, 0.0);
  CHECK(j3 == doctest::Approx(9.0 * j1).epsilon(1e-12));

  // Co-scaling lambda keeps the fit itself unchanged up to rounding. The
  // denominator guard is the only term that does not scale, so drop it.
  SolverParams a = p, c = p;
  a.epsilon_stab = c.epsilon_stab = 0.0;
  a.lambda = 0.1;
  c.lambda = 0.9;
  a.max_iters = c.max_iters = 50;
  const FitResult ra = fit(inst.bundle, inst.k_u, kv, a);
  const FitResult rc = fit(scaled, inst.k_u, kv, c);
  CHECK((predict(ra.factors) - predict(rc.factors)).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("predict and normalize") {
  FactorPair f{Eigen::MatrixXd(2, 1), Eigen::MatrixXd(1, 1)};
  f.u << 1, 2;
  f.v << 3;
  const Eigen::MatrixXd r = predict(f);
  CHECK(r(0, 0) == 3.0);
  CHECK(r(1, 0) == 6.0);
  const Eigen::MatrixXd n = normalize_columns(r);
  CHECK(n(0, 0) == 0.5);
  CHECK(n(1, 0) == 1.0);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 2);
  z(1, 1) = 4.0;
  const Eigen::MatrixXd nz = normalize_columns(z);
  CHECK(nz.col(0).isZero());
  CHECK(nz.col(1).maxCoeff() == 1.0);
}

TEST_CASE("solver parameter validation") {
  SolverParams p;
  p.rank = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = SolverParams{};
  p.lambda = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = SolverParams{};
  p.rel_tol = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

}  // namespace
}  // namespace actionmap
