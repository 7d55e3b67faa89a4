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


#include <doctest.h>

#include "actionmap/error.h"
#include "actionmap/scene_model.h"

namespace actionmap {
namespace {

TEST_CASE("default vocabulary holds the six activities in order") {
  ActivityVocabulary v;
  REQUIRE(v.size() == 6);
  CHECK(v.name(0) == "sit");
  CHECK(v.name(2) == "open-door");
  CHECK(v.name(5) == "wash");
  CHECK(v.find("read") == 3);
  CHECK_FALSE(v.find("dance").has_value());
  CHECK_THROWS_AS(ActivityVocabulary({"a", "a"}), Error);
  CHECK_THROWS_AS(ActivityVocabulary(std::vector<std::string>{}), Error);
}

TEST_CASE("create_scene counts cells and labels") {
  SceneGrid empty = create_scene("s", 4, 4, 0.25, {});
  CHECK(empty.cell_count() == 16);
  CHECK(empty.stats().action_ratio == 0.0);
  CHECK(empty.stats().explored_ratio == 0.0);

  SceneGrid g = create_scene("s", 5, 3, 0.25,
                             {{{0, 0}, 0}, {{1, 2}, 1}, {{4, 1}, 0},
                              {{4, 1}, 0}});
  CHECK(g.labelled_cell_count() == 3);
  CHECK(g.label_cell_count(0) == 2);
  CHECK(g.has_label({1, 2}, 1));
  CHECK(g.labels({4, 1}) == std::vector<int>{0});

  CHECK_THROWS_AS(create_scene("s", 0, 3, 0.25, {}), Error);
  CHECK_THROWS_AS(create_scene("s", 2, 2, 0.25, {{{0, 0}, 6}}), Error);
  CHECK_THROWS_AS(create_scene("s", 2, 2, 0.25, {{{2, 0}, 0}}), Error);
}

TEST_CASE("add_demonstration marks cells explored and keeps the max value") {
  SceneGrid g("s", 6, 6, 0.25);
  g.add_demonstration({{2, 3}, 0, 1.0});
  CHECK(g.stats().demo_count == 1);
  CHECK(g.explored({2, 3}));

  g.add_demonstration({{1, 1}, 2, 0.4});
  g.add_demonstration({{1, 1}, 2, 0.9});
  g.add_demonstration({{1, 1}, 2, 0.5});
  CHECK(g.observed_value({1, 1}, 2) == 0.9);
  CHECK_FALSE(g.observed_value({1, 1}, 0).has_value());

  CHECK_THROWS_AS(g.add_demonstration({{6, 0}, 0, 1.0}), Error);
  CHECK_THROWS_AS(g.add_demonstration({{0, 0}, 0, -0.1}), Error);
  CHECK_THROWS_AS(g.add_demonstration({{0, 0}, 7, 1.0}), Error);
}

TEST_CASE("incremental stats match a recomputation") {
  SceneGrid g("s", 9, 7, 0.25);
  uint64_t x = 12345;
  auto next = [&x](int mod) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<int>((x >> 33) % mod);
  };
  for (int i = 0; i < 200; ++i) {
    if (next(3) == 0) {
      g.add_demonstration({{next(9), next(7)}, next(6), next(10) / 10.0});
    } else {
      g.mark_explored({next(9), next(7)});
    }
    const SceneStats s = g.stats();
    REQUIRE(s == g.recompute_stats());
    REQUIRE(s.action_ratio <= s.explored_ratio);
  }
  g.clear_demonstrations();
  CHECK(g.stats() == g.recompute_stats());
  CHECK(g.stats().demo_count == 0);
}

TEST_CASE("stack_scenes orders rows by scene then row-major cell") {
  SceneGrid a("a", 2, 2, 0.25);
  GlobalIndex one = stack_scenes({&a});
  REQUIRE(one.size() == 4);
  CHECK(one.entry(0).cell == Cell{0, 0});
  CHECK(one.entry(1).cell == Cell{1, 0});
  CHECK(one.entry(2).cell == Cell{0, 1});
  CHECK(one.entry(3).cell == Cell{1, 1});

  SceneGrid b("b", 3, 2, 0.25);
  GlobalIndex two = stack_scenes({&a, &b});
  CHECK(two.size() == 10);
  CHECK(two.offsets() == std::vector<int>{0, 4});
  CHECK(two.scene_rows(1) == 6);
  for (int r = 0; r < two.size(); ++r) {
    const auto& e = two.entry(r);
    REQUIRE(two.row(e.scene, e.cell) == r);
  }

  SceneGrid c("c", 2, 2, 0.25, ActivityVocabulary({"x", "y"}));
  CHECK_THROWS_AS(stack_scenes({&a, &c}), Error);
}

}  // namespace
}  // namespace actionmap
