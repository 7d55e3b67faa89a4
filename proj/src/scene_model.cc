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

#include "actionmap/scene_model.h"

#include <algorithm>
#include <set>

#include "actionmap/error.h"

namespace actionmap {

ActivityVocabulary::ActivityVocabulary()
    : names_{"sit", "type", "open-door", "read", "write-whiteboard", "wash"} {}

ActivityVocabulary::ActivityVocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty()) throw Error("activity vocabulary is empty");
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) throw Error("activity name is empty");
    if (!seen.insert(name).second) {
      throw Error("duplicate activity name '" + name + "'");
    }
  }
}

const std::string& ActivityVocabulary::name(int activity) const {
  if (activity < 0 || activity >= size()) {
    throw Error("activity index " + std::to_string(activity) +
                " out of range");
  }
  return names_[activity];
}

std::optional<int> ActivityVocabulary::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

SceneGrid::SceneGrid(std::string scene_id, int width, int height,
                     double cell_size_m, ActivityVocabulary vocabulary)
    : scene_id_(std::move(scene_id)),
      width_(width),
      height_(height),
      cell_size_m_(cell_size_m),
      vocabulary_(std::move(vocabulary)) {
  if (width < 1 || height < 1) {
    throw Error("scene dimensions must be at least 1x1, got " +
                std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(cell_size_m > 0.0)) throw Error("cell size must be positive");
  explored_.assign(static_cast<size_t>(width) * height, 0);
  labels_.resize(explored_.size());
  demos_per_cell_.assign(explored_.size(), 0);
}

bool SceneGrid::contains(Cell cell) const {
  return cell.x >= 0 && cell.y >= 0 && cell.x < width_ && cell.y < height_;
}

void SceneGrid::check_cell(Cell cell) const {
  if (!contains(cell)) {
    throw Error("cell (" + std::to_string(cell.x) + ", " +
                std::to_string(cell.y) + ") outside " +
                std::to_string(width_) + "x" + std::to_string(height_) +
                " scene '" + scene_id_ + "'");
  }
}

int SceneGrid::index(Cell cell) const {
  check_cell(cell);
  return cell.y * width_ + cell.x;
}

Cell SceneGrid::cell_at(int index) const {
  if (index < 0 || index >= cell_count()) throw Error("cell index out of range");
  return Cell{index % width_, index / width_};
}

void SceneGrid::mark_explored(Cell cell) {
  char& flag = explored_[index(cell)];
  if (!flag) {
    flag = 1;
    ++explored_count_;
  }
}

bool SceneGrid::explored(Cell cell) const { return explored_[index(cell)]; }

void SceneGrid::add_label(Cell cell, int activity) {
  vocabulary_.name(activity);
  auto& labels = labels_[index(cell)];
  auto it = std::lower_bound(labels.begin(), labels.end(), activity);
  if (it == labels.end() || *it != activity) labels.insert(it, activity);
}

const std::vector<int>& SceneGrid::labels(Cell cell) const {
  return labels_[index(cell)];
}

bool SceneGrid::has_label(Cell cell, int activity) const {
  const auto& labels = labels_[index(cell)];
  return std::binary_search(labels.begin(), labels.end(), activity);
}

int SceneGrid::labelled_cell_count() const {
  return static_cast<int>(std::count_if(
      labels_.begin(), labels_.end(),
      [](const std::vector<int>& l) { return !l.empty(); }));
}

int SceneGrid::label_cell_count(int activity) const {
  return static_cast<int>(
      std::count_if(labels_.begin(), labels_.end(),
                    [activity](const std::vector<int>& l) {
                      return std::binary_search(l.begin(), l.end(), activity);
                    }));
}

void SceneGrid::add_demonstration(const Demonstration& demo) {
  const int cell = index(demo.cell);
  vocabulary_.name(demo.activity);
  if (!(demo.value >= 0.0)) {
    throw Error("demonstration value must be non-negative");
  }
  mark_explored(demo.cell);
  demos_.push_back(demo);
  if (demos_per_cell_[cell]++ == 0) ++action_cell_count_;
  auto [it, inserted] = observed_.try_emplace({cell, demo.activity}, demo.value);
  if (!inserted) it->second = std::max(it->second, demo.value);
}

void SceneGrid::clear_demonstrations() {
  demos_.clear();
  observed_.clear();
  std::fill(demos_per_cell_.begin(), demos_per_cell_.end(), 0);
  action_cell_count_ = 0;
}

std::optional<double> SceneGrid::observed_value(Cell cell, int activity) const {
  auto it = observed_.find({index(cell), activity});
  if (it == observed_.end()) return std::nullopt;
  return it->second;
}

SceneStats SceneGrid::stats() const {
  const double total = cell_count();
  return SceneStats{explored_count_ / total, action_cell_count_ / total,
                    static_cast<int>(demos_.size())};
}

SceneStats SceneGrid::recompute_stats() const {
  const double total = cell_count();
  const auto explored = std::count(explored_.begin(), explored_.end(), 1);
  std::set<int> action_cells;
  for (const auto& demo : demos_) action_cells.insert(index(demo.cell));
  return SceneStats{explored / total, action_cells.size() / total,
                    static_cast<int>(demos_.size())};
}

SceneGrid create_scene(std::string scene_id, int width, int height,
                       double cell_size_m,
                       const std::vector<std::pair<Cell, int>>& gt_labels,
                       ActivityVocabulary vocabulary) {
  SceneGrid grid(std::move(scene_id), width, height, cell_size_m,
                 std::move(vocabulary));
  for (const auto& [cell, activity] : gt_labels) grid.add_label(cell, activity);
  return grid;
}

bool Scene::operator==(const Scene& other) const {
  auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return grid == other.grid && scene_class_names == other.scene_class_names &&
         object_category_names == other.object_category_names &&
         poses == other.poses && same(scene_scores, other.scene_scores) &&
         same(object_scores, other.object_scores);
}

int GlobalIndex::row(int scene, Cell cell) const {
  if (scene < 0 || scene >= scene_count()) throw Error("scene out of range");
  const int width = widths_[scene];
  const int local = cell.y * width + cell.x;
  if (cell.x < 0 || cell.x >= width || local < 0 || local >= counts_[scene]) {
    throw Error("cell outside scene in global index lookup");
  }
  return offsets_[scene] + local;
}

GlobalIndex stack_scenes(const std::vector<const SceneGrid*>& scenes) {
  GlobalIndex index;
  if (scenes.empty()) return index;
  const auto& vocabulary = scenes.front()->vocabulary();
  int offset = 0;
  for (int s = 0; s < static_cast<int>(scenes.size()); ++s) {
    const SceneGrid& grid = *scenes[s];
    if (grid.vocabulary() != vocabulary) {
      throw Error("scene '" + grid.scene_id() +
                  "' uses a different activity vocabulary");
    }
    index.offsets_.push_back(offset);
    index.counts_.push_back(grid.cell_count());
    index.widths_.push_back(grid.width());
    for (int i = 0; i < grid.cell_count(); ++i) {
      index.entries_.push_back({s, grid.cell_at(i)});
    }
    offset += grid.cell_count();
  }
  return index;
}

std::vector<const SceneGrid*> grids_of(const std::vector<Scene>& scenes) {
  std::vector<const SceneGrid*> grids;
  grids.reserve(scenes.size());
  for (const auto& scene : scenes) grids.push_back(&scene.grid);
  return grids;
}

}  // namespace actionmap
