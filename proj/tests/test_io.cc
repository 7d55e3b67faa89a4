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


#include <sstream>
#include <string>

#include <doctest.h>

#include "actionmap/error.h"
#include "actionmap/io.h"
#include "actionmap/synthetic.h"

namespace actionmap {
namespace {

const char* kFixture = R"(actionmap-scene 1
scene_id tiny
size 2 2
cell_size_m 0.25
activities 2 sit wash
scene_classes 2 office kitchen
object_categories 1 chair
explored
1 0
1 1
labels 2
0 0 0
1 1 1
demonstrations 1
0 0 0 1
poses 1
0.5 1.5 1 0
features 4
0 0 0.7 0.3 0.28209479
1 0 0.5 0.5 0
0 1 0.2 0.8 0
1 1 0.25 0.75 0.171099
end
)";

TEST_CASE("hand-written 2x2 scene parses to known values") {
  std::istringstream in(kFixture);
  const Scene s = io::read_scene(in, "fixture");
  const SceneGrid& g = s.grid;
  CHECK(g.scene_id() == "tiny");
  CHECK(g.width() == 2);
  CHECK(g.height() == 2);
  CHECK(g.cell_size_m() == 0.25);
  CHECK(g.vocabulary().names() == std::vector<std::string>{"sit", "wash"});
  CHECK(s.scene_class_names == std::vector<std::string>{"office", "kitchen"});
  CHECK(s.object_category_names == std::vector<std::string>{"chair"});
  CHECK(g.explored({0, 0}));
  CHECK_FALSE(g.explored({1, 0}));
  CHECK(g.explored({1, 1}));
  CHECK(g.explored_count() == 3);
  CHECK(g.has_label({0, 0}, 0));
  CHECK(g.has_label({1, 1}, 1));
  CHECK(g.labelled_cell_count() == 2);
  REQUIRE(g.demonstrations().size() == 1);
  CHECK(g.demonstrations()[0] == Demonstration{{0, 0}, 0, 1.0});
  REQUIRE(s.poses.size() == 1);
  CHECK(s.poses[0].position == Eigen::Vector2d(0.5, 1.5));
  CHECK(s.poses[0].heading == Eigen::Vector2d(1.0, 0.0));
  CHECK(s.scene_scores(2, 1) == 0.8);
  CHECK(s.object_scores(0, 0) == 0.28209479);
  CHECK(s.object_scores(3, 0) == 0.171099);

  std::ostringstream out;
  io::write_scene(out, s);
  CHECK(out.str() == kFixture);
}

TEST_CASE("datasets round-trip exactly") {
  const auto gen = synthetic::generate_dataset(
      {synthetic::experiment_spec(2, "a"), synthetic::experiment_spec(3, "b")});
  const io::Dataset ds{gen.plain_scenes(), gen.category_map};
  std::ostringstream out;
  io::write_dataset(out, ds);
  std::istringstream in(out.str());
  const io::Dataset back = io::read_dataset(in);
  CHECK(back == ds);
  std::ostringstream again;
  io::write_dataset(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("version mismatches and malformed lines are refused") {
  std::string v2 = kFixture;
  v2.replace(v2.find("scene 1"), 7, "scene 2");
  std::istringstream in(v2);
  CHECK_THROWS_WITH_AS(io::read_scene(in, "v2.txt"),
                       doctest::Contains("v2.txt:1: unsupported"), Error);

  std::string broken = kFixture;
  broken.replace(broken.find("0.5 1.5 1 0"), 11, "0.5 x 1 0");
  std::istringstream bad(broken);
  CHECK_THROWS_WITH_AS(io::read_scene(bad, "b.txt"),
                       doctest::Contains("b.txt:17: malformed number"), Error);

  std::string truncated = kFixture;
  truncated.resize(truncated.find("features"));
  std::istringstream cut(truncated);
  CHECK_THROWS_WITH_AS(io::read_scene(cut), doctest::Contains("end of input"),
                       Error);

  std::istringstream wrong("actionmap-factors 1\n");
  CHECK_THROWS_AS(io::read_scene(wrong), Error);
}

TEST_CASE("factors, category maps and action maps round-trip") {
  FactorPair f{Eigen::MatrixXd(3, 2), Eigen::MatrixXd(2, 2)};
  f.u << 0.1, 1e-310, 2.5, 3.25, 0.123456789, 7;
  f.v << 1, 2, 3, 4;
  std::stringstream ss;
  io::write_factors(ss, f);
  const FactorPair g = io::read_factors(ss);
  CHECK(g.u == f.u);
  CHECK(g.v == f.v);

  const CategoryActivityMap m = synthetic::default_category_map();
  std::stringstream cm;
  io::write_category_map(cm, m);
  CHECK(io::read_category_map(cm) == m);

  std::istringstream in(kFixture);
  const std::vector<Scene> scenes = {io::read_scene(in)};
  const GlobalIndex index = stack_scenes(grids_of(scenes));
  Eigen::MatrixXd map(4, 2);
  map << 1, 0, 0.5, 0.25, 0.125, 1, 0, 0.75;
  std::stringstream am;
  io::write_action_map(am, map, index, scenes);
  CHECK(am.str().rfind("scene,x,y,sit,wash\n", 0) == 0);
  CHECK(io::read_action_map(am, index, scenes) == map);
}

TEST_CASE("numbers print with nine significant digits") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333");
  CHECK(io::quantize(1.0 / 3.0) == 0.333333333);
  CHECK(io::quantize(io::quantize(2.0 / 3.0)) == io::quantize(2.0 / 3.0));
  CHECK(io::format_number(0.0) == "0");
}

TEST_CASE("greymap export") {
  Eigen::VectorXd v(4);
  v << 0.0, 0.5, 1.0, 0.2;
  std::ostringstream out;
  io::write_pgm(out, v, 2, 2);
  CHECK(out.str() == "P2\n2 2\n255\n0 128\n255 51\n");
}

TEST_CASE("JSON config overrides fields and rejects unknown keys") {
  io::RunConfig c;
  io::apply_json_config(
      R"({"seed": 7, "solver": {"lambda": 0.01, "rank": 4},
          "kernel": {"variant": "SP"}, "grid": {"alphas": [0.5]}})",
      c);
  CHECK(c.seed == 7);
  CHECK(c.solver.lambda == 0.01);
  CHECK(c.solver.rank == 4);
  CHECK(c.kernel.variant == KernelVariant::kSP);
  CHECK(c.grid.alphas == std::vector<double>{0.5});
  CHECK_THROWS_AS(io::apply_json_config(R"({"sed": 1})", c), Error);
  CHECK_THROWS_AS(io::apply_json_config(R"({"solver": {"lamda": 1}})", c),
                  Error);
  CHECK_THROWS_AS(io::apply_json_config("{", c), Error);
}

}  // namespace
}  // namespace actionmap
