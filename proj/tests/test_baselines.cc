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


#include <random>

#include <doctest.h>

#include "actionmap/baselines.h"
#include "actionmap/error.h"
#include "actionmap/scene_model.h"

namespace actionmap {
namespace {

TEST_CASE("detection map keeps the strongest mapped category") {
  CategoryActivityMap m(3, 2);
  m.add(0, 0);
  m.add(1, 0);
  m.add(2, 1);
  m.add(2, 1);
  CHECK(m.activities_for(2) == std::vector<int>{1});

  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(4, 3);
  o(1, 0) = 0.28;
  Eigen::MatrixXd raw = detection_action_map(o, m, false);
  CHECK(raw(1, 0) == 0.28);
  CHECK(raw.col(0).sum() == 0.28);
  CHECK(raw.col(1).isZero());

  o(2, 0) = 0.1;
  o(2, 1) = 0.2;
  raw = detection_action_map(o, m, false);
  CHECK(raw(2, 0) == 0.2);
  const Eigen::MatrixXd norm = detection_action_map(o, m);
  CHECK(norm(1, 0) == 1.0);
  CHECK(norm.col(1).isZero());

  CHECK_THROWS_AS(m.add(3, 0), Error);
  CHECK_THROWS_AS(m.add(0, 2), Error);
  CHECK_THROWS_AS(detection_action_map(Eigen::MatrixXd::Zero(2, 2), m), Error);
  CHECK(detection_action_map(o, CategoryActivityMap(3, 2)).isZero());
}

TEST_CASE("detection map is monotone in the object scores") {
  CategoryActivityMap m(4, 3);
  m.add(0, 0);
  m.add(1, 0);
  m.add(2, 1);
  m.add(3, 2);
  m.add(3, 0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(0.0, 0.3);
  Eigen::MatrixXd o(20, 4);
  for (int i = 0; i < o.size(); ++i) o.data()[i] = uni(rng);
  const Eigen::MatrixXd base = detection_action_map(o, m, false);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd bumped = o;
    bumped(trial % 20, trial % 4) += uni(rng);
    REQUIRE((detection_action_map(bumped, m, false).array() >=
             base.array()).all());
  }
}

ActionMatrixBundle small_bundle() {
  SceneGrid g("s", 5, 4, 0.25, ActivityVocabulary({"a", "b"}));
  g.add_demonstration({{0, 0}, 0, 1.0});
  g.add_demonstration({{3, 2}, 1, 1.0});
  g.add_demonstration({{4, 3}, 1, 0.6});
  for (int x = 0; x < 5; ++x) g.mark_explored({x, 1});
  return build_weight_matrix({&g}, stack_scenes({&g}));
}

TEST_CASE("augmented NMF without features is plain weighted NMF") {
  const ActionMatrixBundle b = small_bundle();
  SolverParams p;
  p.rank = 2;
  p.max_iters = 200;
  p.lambda = 0.5;
  const std::vector<bool> seen(20, true);
  const Eigen::MatrixXd aug = augmented_wnmf(b, Eigen::MatrixXd(20, 0),
                                             Eigen::MatrixXd(20, 0), seen, p);
  SolverParams plain = p;
  plain.lambda = 0.0;
  const FitResult r =
      fit(b, GramMatrix::identity(20), GramMatrix::identity(2), plain);
  CHECK((aug - normalize_columns(predict(r.factors))).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("augmented NMF ignores all-zero feature columns") {
  const ActionMatrixBundle b = small_bundle();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::MatrixXd p(20, 3), o(20, 2);
  for (int i = 0; i < p.size(); ++i) p.data()[i] = uni(rng);
  for (int i = 0; i < o.size(); ++i) o.data()[i] = uni(rng) * 0.28;
  std::vector<bool> seen(20, false);
  for (int i = 0; i < 20; i += 2) seen[i] = true;
  SolverParams sp;
  sp.rank = 3;
  sp.max_iters = 100;
  const Eigen::MatrixXd base = augmented_wnmf(b, p, o, seen, sp);

  Eigen::MatrixXd o_padded = Eigen::MatrixXd::Zero(20, 4);
  o_padded.leftCols(2) = o;
  CHECK((augmented_wnmf(b, p, o_padded, seen, sp) - base)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((base.array() >= 0.0).all());
  CHECK((base.array() <= 1.0).all());

  CHECK_THROWS_AS(augmented_wnmf(b, p.topRows(3), o, seen, sp), Error);
  Eigen::MatrixXd negative = p;
  negative(0, 0) = -1.0;
  CHECK_THROWS_AS(augmented_wnmf(b, negative, o, seen, sp), Error);
}

}  // namespace
}  // namespace actionmap
