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

#ifndef ACTIONMAP_SYNTHETIC_H_
#define ACTIONMAP_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "actionmap/baselines.h"
#include "actionmap/scene_model.h"
#include "actionmap/side_info.h"

namespace actionmap::synthetic {

// Indices into the default activity vocabulary.
enum Activity : int {
  kSit = 0,
  kType = 1,
  kOpenDoor = 2,
  kRead = 3,
  kWriteWhiteboard = 4,
  kWash = 5,
};

enum ObjectCategory : int {
  kChair = 0,
  kCouch,
  kTable,
  kMonitor,
  kBook,
  kSink,
  kWhiteboard,
  kPlant,
  kTrashCan,
  kObjectCategoryCount,
};

enum class Region : int {
  kOffice = 0,
  kCorridor,
  kKitchen,
  kMeeting,
  kLounge,
  kWall,
  kDoorway,
};

const std::vector<std::string>& scene_class_names();
const std::vector<std::string>& object_category_names();
// chair, couch -> sit; couch, book -> read; monitor -> type; sink -> wash;
// whiteboard -> write-whiteboard.
CategoryActivityMap default_category_map();

struct WorldSpec {
  std::string scene_id = "synthetic";
  // Layout: two bands of rooms separated by a corridor and wall rows.
  int width = 24;
  int room_depth = 6;
  int corridor_height = 2;
  int room_width_min = 4;
  int room_width_max = 7;
  double cell_size_m = 0.25;
  // Relative frequency of room types beyond the guaranteed kitchen and
  // meeting room.
  double office_weight = 0.6;
  double meeting_weight = 0.1;
  double kitchen_weight = 0.1;
  double lounge_weight = 0.2;

  // Scene-class scores: `scene_peak` on the region's class, the remainder
  // spread evenly over the other classes.
  double scene_peak = 0.3;
  double feature_smoothing = 0.3;
  double feature_noise = 0.005;
  double detection_miss_rate = 0.3;
  int false_detections = 3;
  double detection_jitter = 0.5;     // cells
  double localization_jitter = 1.0;  // cells

  double target_explored_ratio = 0.6;
  int demo_sessions = 12;
  int demo_count = 40;
  double pose_density = 0.35;
  uint64_t seed = 1;

  int height() const { return 2 * room_depth + corridor_height + 2; }
  void validate() const;
};

// Sparse office floor: about 59% explored, 3% of entries observed, 90 demos.
WorldSpec office_a_like_spec(uint64_t seed);
// Smaller floor used by the experiment harness.
WorldSpec experiment_spec(uint64_t seed, std::string scene_id = "synthetic");
// Noise-free variant of `spec`.
WorldSpec noiseless(WorldSpec spec);

struct PlacedObject {
  int category = 0;
  Cell cell;
};

struct GeneratedScene {
  Scene scene;
  std::vector<Region> regions;  // per cell
  std::vector<int> room_of;     // per cell, -1 outside rooms
  std::vector<bool> room_visited;
  std::vector<PlacedObject> objects;
  std::vector<Cell> doorways;
  std::vector<GroundDetection> detections;
};

struct GeneratedDataset {
  ActivityVocabulary vocabulary;
  std::vector<GeneratedScene> scenes;
  CategoryActivityMap category_map;

  std::vector<Scene> plain_scenes() const;
};

// Region signature used for the scene-class scores.
Eigen::VectorXd scene_signature(Region region, const WorldSpec& spec);

GeneratedScene generate_scene(const WorldSpec& spec, uint64_t seed);
GeneratedDataset generate_dataset(const std::vector<WorldSpec>& specs);

// A seeded uniform subset of `demos`: the first round(fraction * n) entries
// of one fixed permutation, so smaller fractions are prefixes of larger ones.
std::vector<Demonstration> sample_demonstrations(
    const std::vector<Demonstration>& demos, double fraction, uint64_t seed);

// Copy of `scene` whose demonstrations are replaced by `demos`.
Scene with_demonstrations(const Scene& scene,
                          const std::vector<Demonstration>& demos);

}  // namespace actionmap::synthetic

#endif  // ACTIONMAP_SYNTHETIC_H_
