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

#include "actionmap/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "actionmap/error.h"
#include "actionmap/io.h"

namespace actionmap::synthetic {
namespace {

using Rng = std::mt19937_64;
using io::quantize;

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per generation stage so that, e.g., feature noise does
// not perturb the layout.
Rng stream(uint64_t seed, uint64_t stage) {
  return Rng(splitmix(splitmix(seed) + stage));
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

double gaussian(Rng& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

struct Room {
  int x0, x1, y0, y1;
  Region type = Region::kOffice;
  Cell door;
  Cell inside_door;  // interior cell right behind the doorway
};

struct Layout {
  int width = 0;
  int height = 0;
  std::vector<Region> regions;
  std::vector<int> room_of;
  std::vector<Room> rooms;

  int at(Cell c) const { return c.y * width + c.x; }
  bool inside(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
  }
  bool walkable(Cell c) const {
    return inside(c) && regions[at(c)] != Region::kWall;
  }
};

Layout make_layout(const WorldSpec& spec, Rng& rng) {
  Layout layout;
  layout.width = spec.width;
  layout.height = spec.height();
  const int cells = layout.width * layout.height;
  layout.regions.assign(cells, Region::kWall);
  layout.room_of.assign(cells, -1);

  const int top_wall = spec.room_depth;
  const int bottom_wall = spec.room_depth + spec.corridor_height + 1;
  for (int y = top_wall + 1; y < bottom_wall; ++y) {
    for (int x = 0; x < layout.width; ++x) {
      layout.regions[layout.at({x, y})] = Region::kCorridor;
    }
  }

  for (int band = 0; band < 2; ++band) {
    const int y0 = band == 0 ? 0 : bottom_wall + 1;
    const int y1 = band == 0 ? top_wall - 1 : layout.height - 1;
    const int wall_row = band == 0 ? top_wall : bottom_wall;
    int x = 0;
    while (layout.width - x >= spec.room_width_min) {
      const int remaining = layout.width - x;
      int w = uniform_int(rng, spec.room_width_min,
                          std::min(spec.room_width_max, remaining));
      if (remaining - w - 1 < spec.room_width_min) w = remaining;
      Room room{x, x + w - 1, y0, y1, Region::kOffice, {}, {}};
      const int door_x = uniform_int(rng, room.x0, room.x1);
      room.door = {door_x, wall_row};
      room.inside_door = {door_x, band == 0 ? y1 : y0};
      layout.rooms.push_back(room);
      x += w + 1;
    }
  }

  // At least one kitchen and one meeting room per floor.
  std::vector<int> order(layout.rooms.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::discrete_distribution<int> pick_type({spec.office_weight,
                                             spec.meeting_weight,
                                             spec.kitchen_weight,
                                             spec.lounge_weight});
  const Region by_index[] = {Region::kOffice, Region::kMeeting,
                             Region::kKitchen, Region::kLounge};
  for (size_t k = 0; k < order.size(); ++k) {
    Room& room = layout.rooms[order[k]];
    if (k == 0) {
      room.type = Region::kKitchen;
    } else if (k == 1) {
      room.type = Region::kMeeting;
    } else {
      room.type = by_index[pick_type(rng)];
    }
  }
  for (int r = 0; r < static_cast<int>(layout.rooms.size()); ++r) {
    const Room& room = layout.rooms[r];
    for (int y = room.y0; y <= room.y1; ++y) {
      for (int x = room.x0; x <= room.x1; ++x) {
        layout.regions[layout.at({x, y})] = room.type;
        layout.room_of[layout.at({x, y})] = r;
      }
    }
    layout.regions[layout.at(room.door)] = Region::kDoorway;
    layout.room_of[layout.at(room.door)] = r;
  }
  return layout;
}

class Furnisher {
 public:
  Furnisher(const Layout& layout, Rng& rng) : layout_(layout), rng_(rng) {
    occupied_.assign(layout.regions.size(), 0);
  }

  std::vector<PlacedObject> furnish() {
    for (const Room& room : layout_.rooms) furnish_room(room);
    furnish_corridor();
    return objects_;
  }

 private:
  bool on_boundary(const Room& room, Cell c) const {
    return c.x == room.x0 || c.x == room.x1 || c.y == room.y0 ||
           c.y == room.y1;
  }

  bool free_cell(const Room& room, Cell c) const {
    if (c.x < room.x0 || c.x > room.x1 || c.y < room.y0 || c.y > room.y1) {
      return false;
    }
    if (occupied_[layout_.at(c)]) return false;
    // Keep the entrance clear.
    return std::abs(c.x - room.inside_door.x) + std::abs(c.y - room.inside_door.y) > 1;
  }

  std::optional<Cell> pick(const Room& room, bool boundary) {
    std::vector<Cell> options;
    for (int y = room.y0; y <= room.y1; ++y) {
      for (int x = room.x0; x <= room.x1; ++x) {
        const Cell c{x, y};
        if (free_cell(room, c) && on_boundary(room, c) == boundary) {
          options.push_back(c);
        }
      }
    }
    if (options.empty()) return std::nullopt;
    return options[uniform_int(rng_, 0, static_cast<int>(options.size()) - 1)];
  }

  std::optional<Cell> neighbor(const Room& room, Cell c) {
    const Cell candidates[] = {{c.x + 1, c.y}, {c.x - 1, c.y},
                               {c.x, c.y + 1}, {c.x, c.y - 1}};
    std::vector<Cell> options;
    for (const Cell& n : candidates) {
      if (free_cell(room, n)) options.push_back(n);
    }
    if (options.empty()) return std::nullopt;
    return options[uniform_int(rng_, 0, static_cast<int>(options.size()) - 1)];
  }

  void place(int category, Cell c) {
    objects_.push_back({category, c});
    occupied_[layout_.at(c)] = 1;
  }

  void place_at_boundary(const Room& room, int category) {
    if (auto c = pick(room, true)) place(category, *c);
  }

  void place_table_with_chairs(const Room& room, int chairs) {
    auto table = pick(room, false);
    if (!table) table = pick(room, true);
    if (!table) return;
    place(kTable, *table);
    for (int i = 0; i < chairs; ++i) {
      if (auto chair = neighbor(room, *table)) place(kChair, *chair);
    }
  }

  void furnish_room(const Room& room) {
    const int area = (room.x1 - room.x0 + 1) * (room.y1 - room.y0 + 1);
    switch (room.type) {
      case Region::kOffice: {
        const int stations = 1 + (area >= 30 && coin(rng_, 0.5) ? 1 : 0);
        for (int s = 0; s < stations; ++s) {
          auto desk = pick(room, true);
          if (!desk) break;
          place(kTable, *desk);
          objects_.push_back({kMonitor, *desk});
          if (coin(rng_, 0.5)) objects_.push_back({kBook, *desk});
          if (auto chair = neighbor(room, *desk)) place(kChair, *chair);
        }
        if (coin(rng_, 0.3)) place_at_boundary(room, kPlant);
        if (coin(rng_, 0.5)) place_at_boundary(room, kTrashCan);
        break;
      }
      case Region::kMeeting:
        place_table_with_chairs(room, uniform_int(rng_, 3, 4));
        place_at_boundary(room, kWhiteboard);
        if (coin(rng_, 0.3)) place_at_boundary(room, kPlant);
        break;
      case Region::kKitchen:
        place_at_boundary(room, kSink);
        place_table_with_chairs(room, 2);
        place_at_boundary(room, kTrashCan);
        break;
      case Region::kLounge: {
        const int couches = uniform_int(rng_, 1, 2);
        for (int i = 0; i < couches; ++i) place_at_boundary(room, kCouch);
        auto table = pick(room, false);
        if (table) {
          place(kTable, *table);
          if (coin(rng_, 0.7)) objects_.push_back({kBook, *table});
        }
        if (coin(rng_, 0.5)) place_at_boundary(room, kPlant);
        break;
      }
      default:
        break;
    }
  }

  void furnish_corridor() {
    std::vector<Cell> corridor;
    for (int i = 0; i < static_cast<int>(layout_.regions.size()); ++i) {
      if (layout_.regions[i] == Region::kCorridor) {
        corridor.push_back({i % layout_.width, i / layout_.width});
      }
    }
    if (corridor.empty()) return;
    for (int category : {kPlant, kTrashCan}) {
      if (!coin(rng_, 0.5)) continue;
      const Cell c =
          corridor[uniform_int(rng_, 0, static_cast<int>(corridor.size()) - 1)];
      if (!occupied_[layout_.at(c)]) place(category, c);
    }
  }

  const Layout& layout_;
  Rng& rng_;
  std::vector<char> occupied_;
  std::vector<PlacedObject> objects_;
};

Eigen::Vector2d center(Cell c) { return Eigen::Vector2d(c.x + 0.5, c.y + 0.5); }

// Cells whose centers are within the object radius of `source`.
std::vector<Cell> reach_of(const Layout& layout, Cell source) {
  std::vector<Cell> cells;
  const double r2 = kObjectRadius * kObjectRadius;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const Cell c{source.x + dx, source.y + dy};
      if (!layout.inside(c)) continue;
      if ((center(c) - center(source)).squaredNorm() <= r2) cells.push_back(c);
    }
  }
  return cells;
}

int region_class(Region region) {
  switch (region) {
    case Region::kOffice:
      return 0;
    case Region::kCorridor:
      return 1;
    case Region::kKitchen:
      return 2;
    case Region::kMeeting:
      return 3;
    case Region::kLounge:
      return 4;
    default:
      return -1;
  }
}

}  // namespace

const std::vector<std::string>& scene_class_names() {
  static const std::vector<std::string> names = {
      "office", "corridor", "kitchen", "conference_room",
      "lounge", "lobby",    "storage", "bathroom"};
  return names;
}

const std::vector<std::string>& object_category_names() {
  static const std::vector<std::string> names = {
      "chair", "couch",      "table", "monitor",  "book",
      "sink",  "whiteboard", "plant", "trash_can"};
  return names;
}

CategoryActivityMap default_category_map() {
  CategoryActivityMap map(kObjectCategoryCount, 6);
  map.add(kChair, kSit);
  map.add(kCouch, kSit);
  map.add(kCouch, kRead);
  map.add(kBook, kRead);
  map.add(kMonitor, kType);
  map.add(kSink, kWash);
  map.add(kWhiteboard, kWriteWhiteboard);
  return map;
}

void WorldSpec::validate() const {
  if (width < room_width_min || room_width_min < 3 ||
      room_width_max < room_width_min) {
    throw Error("invalid room width range");
  }
  if (room_depth < 3 || corridor_height < 1) {
    throw Error("rooms need depth >= 3 and the corridor height >= 1");
  }
  if (!(cell_size_m > 0.0)) throw Error("cell size must be positive");
  for (double p : {detection_miss_rate, target_explored_ratio, pose_density,
                   feature_smoothing}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error("world spec probabilities must lie in [0, 1]");
    }
  }
  for (double s : {feature_noise, detection_jitter, localization_jitter}) {
    if (!(s >= 0.0)) throw Error("world spec noise levels must be >= 0");
  }
  const int classes = static_cast<int>(scene_class_names().size());
  if (!(scene_peak >= 1.0 / classes && scene_peak <= 1.0)) {
    throw Error("scene_peak must lie in [1/C, 1]");
  }
  if (false_detections < 0 || demo_sessions < 0 || demo_count < 0) {
    throw Error("counts must be non-negative");
  }
  if (office_weight < 0 || meeting_weight < 0 || kitchen_weight < 0 ||
      lounge_weight < 0 ||
      office_weight + meeting_weight + kitchen_weight + lounge_weight <= 0) {
    throw Error("room type weights must be non-negative and not all zero");
  }
}

WorldSpec office_a_like_spec(uint64_t seed) {
  WorldSpec spec;
  spec.scene_id = "office_a_like";
  spec.width = 36;
  spec.room_depth = 9;
  spec.corridor_height = 3;
  spec.target_explored_ratio = 0.59;
  spec.demo_sessions = 26;
  spec.demo_count = 90;
  spec.seed = seed;
  return spec;
}

WorldSpec experiment_spec(uint64_t seed, std::string scene_id) {
  WorldSpec spec;
  spec.scene_id = std::move(scene_id);
  spec.seed = seed;
  return spec;
}

WorldSpec noiseless(WorldSpec spec) {
  spec.feature_smoothing = 0.0;
  spec.feature_noise = 0.0;
  spec.detection_miss_rate = 0.0;
  spec.false_detections = 0;
  spec.detection_jitter = 0.0;
  spec.localization_jitter = 0.0;
  return spec;
}

std::vector<Scene> GeneratedDataset::plain_scenes() const {
  std::vector<Scene> out;
  out.reserve(scenes.size());
  for (const auto& s : scenes) out.push_back(s.scene);
  return out;
}

Eigen::VectorXd scene_signature(Region region, const WorldSpec& spec) {
  const int classes = static_cast<int>(scene_class_names().size());
  const int peak = region_class(region);
  if (peak < 0) throw Error("walls and doorways have no direct signature");
  Eigen::VectorXd sig =
      Eigen::VectorXd::Constant(classes, (1.0 - spec.scene_peak) / (classes - 1));
  sig[peak] = spec.scene_peak;
  return sig;
}

GeneratedScene generate_scene(const WorldSpec& spec, uint64_t seed) {
  spec.validate();
  Rng layout_rng = stream(seed, 1);
  Rng object_rng = stream(seed, 2);
  Rng feature_rng = stream(seed, 3);
  Rng detection_rng = stream(seed, 4);
  Rng explore_rng = stream(seed, 5);
  Rng demo_rng = stream(seed, 6);
  Rng pose_rng = stream(seed, 7);

  const Layout layout = make_layout(spec, layout_rng);
  const int width = layout.width, height = layout.height;
  const int cells = width * height;
  const CategoryActivityMap category_map = default_category_map();

  GeneratedScene out{
      Scene{SceneGrid(spec.scene_id, width, height, spec.cell_size_m),
            scene_class_names(), object_category_names(), {}, {}, {}},
      {}, {}, {}, {}, {}, {}};
  out.regions = layout.regions;
  out.room_of = layout.room_of;
  out.objects = Furnisher(layout, object_rng).furnish();
  for (const Room& room : layout.rooms) out.doorways.push_back(room.door);
  SceneGrid& grid = out.scene.grid;

  // Ground truth: cells within the object radius of an affording object or
  // of a doorway.
  for (const PlacedObject& object : out.objects) {
    for (int a : category_map.activities_for(object.category)) {
      for (const Cell& c : reach_of(layout, object.cell)) grid.add_label(c, a);
    }
  }
  for (const Cell& door : out.doorways) {
    for (const Cell& c : reach_of(layout, door)) grid.add_label(c, kOpenDoor);
  }

  // Exploration: the whole corridor, then rooms greedily towards the target
  // explored ratio.
  out.room_visited.assign(layout.rooms.size(), false);
  int explored = 0;
  for (int i = 0; i < cells; ++i) {
    if (layout.regions[i] == Region::kCorridor) ++explored;
  }
  {
    std::vector<int> order(layout.rooms.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::shuffle(order.begin(), order.end(), explore_rng);
    auto gain = [&](int r) {
      const Room& room = layout.rooms[r];
      return (room.x1 - room.x0 + 1) * (room.y1 - room.y0 + 1) + 1;
    };
    // The demonstrator always reaches a kitchen and a meeting room so that
    // every activity can be performed at least once.
    for (Region needed : {Region::kKitchen, Region::kMeeting}) {
      for (int r : order) {
        if (layout.rooms[r].type == needed) {
          out.room_visited[r] = true;
          explored += gain(r);
          break;
        }
      }
    }
    const double target = spec.target_explored_ratio * cells;
    for (int r : order) {
      if (out.room_visited[r]) continue;
      if (std::abs(explored + gain(r) - target) < std::abs(explored - target)) {
        out.room_visited[r] = true;
        explored += gain(r);
      }
    }
  }
  auto visited_cell = [&](int i) {
    if (layout.regions[i] == Region::kCorridor) return true;
    const int room = layout.room_of[i];
    return room >= 0 && out.room_visited[room];
  };
  for (int i = 0; i < cells; ++i) {
    if (visited_cell(i)) grid.mark_explored(grid.cell_at(i));
  }

  // Scene-class scores.
  std::vector<Eigen::VectorXd> signature(cells);
  for (int i = 0; i < cells; ++i) {
    const Region region = layout.regions[i];
    if (region_class(region) >= 0) signature[i] = scene_signature(region, spec);
  }
  for (int i = 0; i < cells; ++i) {
    if (signature[i].size() > 0) continue;
    // Walls and doorways take the mean signature of their open neighbors.
    const Cell c = grid.cell_at(i);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(scene_class_names().size());
    int n = 0;
    for (const Cell& nb : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y},
                           Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
      if (!layout.inside(nb)) continue;
      const Region region = layout.regions[layout.at(nb)];
      if (region_class(region) < 0) continue;
      sum += scene_signature(region, spec);
      ++n;
    }
    signature[i] = n > 0 ? Eigen::VectorXd(sum / n)
                         : scene_signature(Region::kCorridor, spec);
  }
  const int classes = static_cast<int>(scene_class_names().size());
  out.scene.scene_scores.resize(cells, classes);
  for (int i = 0; i < cells; ++i) {
    const Cell c = grid.cell_at(i);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(classes);
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell nb{c.x + dx, c.y + dy};
        if (!layout.inside(nb)) continue;
        local += signature[layout.at(nb)];
        ++n;
      }
    }
    Eigen::VectorXd p = (1.0 - spec.feature_smoothing) * signature[i] +
                        spec.feature_smoothing * local / n;
    for (int k = 0; k < classes; ++k) {
      out.scene.scene_scores(i, k) =
          quantize(std::max(0.0, p[k] + gaussian(feature_rng, spec.feature_noise)));
    }
  }

  // Object detections back-projected to the floor.
  for (const PlacedObject& object : out.objects) {
    if (coin(detection_rng, spec.detection_miss_rate)) continue;
    Eigen::Vector2d position = center(object.cell);
    position.x() += gaussian(detection_rng, spec.detection_jitter);
    position.y() += gaussian(detection_rng, spec.detection_jitter);
    out.detections.push_back({object.category, position});
  }
  {
    std::vector<int> open;
    for (int i = 0; i < cells; ++i) {
      if (layout.regions[i] != Region::kWall) open.push_back(i);
    }
    for (int k = 0; k < spec.false_detections && !open.empty(); ++k) {
      const int category = uniform_int(detection_rng, 0, kObjectCategoryCount - 1);
      const Cell c =
          grid.cell_at(open[uniform_int(detection_rng, 0,
                                        static_cast<int>(open.size()) - 1)]);
      std::uniform_real_distribution<double> offset(-0.5, 0.5);
      Eigen::Vector2d position = center(c);
      position.x() += offset(detection_rng);
      position.y() += offset(detection_rng);
      out.detections.push_back({category, position});
    }
  }
  out.scene.object_scores = aggregate_object_scores(
      out.detections, width, height, kObjectCategoryCount);
  out.scene.object_scores = out.scene.object_scores.unaryExpr(
      [](double v) { return quantize(v); });

  // Demonstration sessions at affordance sources inside the explored area.
  struct Source {
    Cell cell;
    int activity;
  };
  std::vector<Source> sources;
  for (const PlacedObject& object : out.objects) {
    if (!grid.explored(object.cell)) continue;
    for (int a : category_map.activities_for(object.category)) {
      sources.push_back({object.cell, a});
    }
  }
  for (const Cell& door : out.doorways) {
    const int room = layout.room_of[layout.at(door)];
    if (out.room_visited[room]) sources.push_back({door, kOpenDoor});
  }
  auto walk_cells = [&](const Source& s) {
    std::vector<Cell> cells_near;
    for (const Cell& c : reach_of(layout, s.cell)) {
      if (layout.walkable(c) && grid.explored(c)) cells_near.push_back(c);
    }
    return cells_near;
  };
  std::vector<int> present;
  for (int a = 0; a < grid.activity_count(); ++a) {
    if (std::any_of(sources.begin(), sources.end(),
                    [&](const Source& s) { return s.activity == a; })) {
      present.push_back(a);
    }
  }

  std::vector<Demonstration> demos;
  if (!sources.empty()) {
    for (int session = 0; session < spec.demo_sessions; ++session) {
      // The first sessions cover every demonstrable activity once.
      std::vector<int> pool;
      if (session < static_cast<int>(present.size())) {
        for (int i = 0; i < static_cast<int>(sources.size()); ++i) {
          if (sources[i].activity == present[session]) pool.push_back(i);
        }
      } else {
        for (int i = 0; i < static_cast<int>(sources.size()); ++i) {
          pool.push_back(i);
        }
      }
      const Source& source =
          sources[pool[uniform_int(demo_rng, 0, static_cast<int>(pool.size()) - 1)]];
      const auto near = walk_cells(source);
      if (near.empty()) continue;
      const Cell site =
          near[uniform_int(demo_rng, 0, static_cast<int>(near.size()) - 1)];
      Cell located = site;
      for (int attempt = 0; attempt < 20; ++attempt) {
        const Cell c{
            site.x + static_cast<int>(std::lround(
                         gaussian(demo_rng, spec.localization_jitter))),
            site.y + static_cast<int>(std::lround(
                         gaussian(demo_rng, spec.localization_jitter)))};
        if (layout.walkable(c) && grid.explored(c)) {
          located = c;
          break;
        }
      }
      const int per_session =
          spec.demo_count / spec.demo_sessions +
          (session < spec.demo_count % spec.demo_sessions ? 1 : 0);
      for (int k = 0; k < per_session; ++k) {
        demos.push_back({located, source.activity, 1.0});
      }
      ViewPose pose;
      pose.position = center(located);
      const Eigen::Vector2d toward = center(source.cell) - center(located);
      if (toward.norm() > 0.0) {
        pose.heading = toward.normalized();
      } else {
        const double angle =
            std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(
                pose_rng);
        pose.heading = Eigen::Vector2d(std::cos(angle), std::sin(angle));
      }
      pose.heading = pose.heading.unaryExpr([](double v) { return quantize(v); });
      out.scene.poses.push_back(pose);
    }
  }
  for (const Demonstration& demo : demos) grid.add_demonstration(demo);

  // Walkthrough images.
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < cells; ++i) {
    const Cell c = grid.cell_at(i);
    if (!grid.explored(c) || !layout.walkable(c)) continue;
    if (!coin(pose_rng, spec.pose_density)) continue;
    ViewPose pose;
    pose.position = center(c) + Eigen::Vector2d(jitter(pose_rng), jitter(pose_rng));
    const double theta = angle(pose_rng);
    pose.heading = Eigen::Vector2d(std::cos(theta), std::sin(theta));
    pose.position = pose.position.unaryExpr([](double v) { return quantize(v); });
    pose.heading = pose.heading.unaryExpr([](double v) { return quantize(v); });
    out.scene.poses.push_back(pose);
  }
  return out;
}

GeneratedDataset generate_dataset(const std::vector<WorldSpec>& specs) {
  GeneratedDataset dataset;
  dataset.category_map = default_category_map();
  for (const WorldSpec& spec : specs) {
    dataset.scenes.push_back(generate_scene(spec, spec.seed));
  }
  return dataset;
}

std::vector<Demonstration> sample_demonstrations(
    const std::vector<Demonstration>& demos, double fraction, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error("demonstration fraction must lie in [0, 1]");
  }
  std::vector<int> order(demos.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  Rng rng(splitmix(seed));
  // Fisher-Yates with our own index draws keeps the permutation independent
  // of the standard library's shuffle implementation.
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
    std::swap(order[i], order[rng() % static_cast<uint64_t>(i + 1)]);
  }
  const auto keep = static_cast<size_t>(
      std::llround(fraction * static_cast<double>(demos.size())));
  std::vector<Demonstration> subset;
  subset.reserve(keep);
  for (size_t i = 0; i < keep; ++i) subset.push_back(demos[order[i]]);
  return subset;
}

Scene with_demonstrations(const Scene& scene,
                          const std::vector<Demonstration>& demos) {
  Scene copy = scene;
  copy.grid.clear_demonstrations();
  for (const Demonstration& demo : demos) copy.grid.add_demonstration(demo);
  return copy;
}

}  // namespace actionmap::synthetic
