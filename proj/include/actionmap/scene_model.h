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

#ifndef ACTIONMAP_SCENE_MODEL_H_
#define ACTIONMAP_SCENE_MODEL_H_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace actionmap {

// Integer grid coordinates. x is the column, y is the row.
struct Cell {
  int x = 0;
  int y = 0;

  auto operator<=>(const Cell&) const = default;
};

// Ordered activity labels; column a of every Action Map belongs to name(a).
class ActivityVocabulary {
 public:
  // sit, type, open-door, read, write-whiteboard, wash.
  ActivityVocabulary();
  explicit ActivityVocabulary(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int activity) const;
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> find(std::string_view name) const;

  bool operator==(const ActivityVocabulary&) const = default;

 private:
  std::vector<std::string> names_;
};

// One localized activity observation. value is 1 for labelled demonstrations
// and the detector confidence for detected ones.
struct Demonstration {
  Cell cell;
  int activity = 0;
  double value = 1.0;

  bool operator==(const Demonstration&) const = default;
};

struct SceneStats {
  double explored_ratio = 0.0;  // r_e
  double action_ratio = 0.0;    // r_a
  int demo_count = 0;

  bool operator==(const SceneStats&) const = default;
};

// Camera pose expressed in continuous grid units (cell (i, j) spans
// [i, i+1) x [j, j+1)).
struct ViewPose {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d heading = Eigen::Vector2d::UnitX();

  bool operator==(const ViewPose& other) const {
    return position == other.position && heading == other.heading;
  }
};

// A discretized floor: explored mask, cell-level ground-truth affordances and
// the demonstrations observed so far.
class SceneGrid {
 public:
  SceneGrid(std::string scene_id, int width, int height, double cell_size_m,
            ActivityVocabulary vocabulary = ActivityVocabulary());

  const std::string& scene_id() const { return scene_id_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int cell_count() const { return width_ * height_; }
  double cell_size_m() const { return cell_size_m_; }
  const ActivityVocabulary& vocabulary() const { return vocabulary_; }
  int activity_count() const { return vocabulary_.size(); }

  bool contains(Cell cell) const;
  // Row-major index y * width + x.
  int index(Cell cell) const;
  Cell cell_at(int index) const;

  void mark_explored(Cell cell);
  bool explored(Cell cell) const;
  int explored_count() const { return explored_count_; }

  void add_label(Cell cell, int activity);
  // Sorted, duplicate free.
  const std::vector<int>& labels(Cell cell) const;
  bool has_label(Cell cell, int activity) const;
  int labelled_cell_count() const;
  int label_cell_count(int activity) const;

  // Marks the cell explored and records the demonstration. Repeated
  // (cell, activity) pairs keep the maximum value.
  void add_demonstration(const Demonstration& demo);
  void clear_demonstrations();
  // Every demonstration in insertion order.
  const std::vector<Demonstration>& demonstrations() const { return demos_; }
  std::optional<double> observed_value(Cell cell, int activity) const;
  // (cell index, activity) -> max value.
  const std::map<std::pair<int, int>, double>& observed_entries() const {
    return observed_;
  }

  SceneStats stats() const;
  SceneStats recompute_stats() const;

  bool operator==(const SceneGrid&) const = default;

 private:
  void check_cell(Cell cell) const;

  std::string scene_id_;
  int width_ = 1;
  int height_ = 1;
  double cell_size_m_ = 0.25;
  ActivityVocabulary vocabulary_;
  std::vector<char> explored_;
  std::vector<std::vector<int>> labels_;
  std::vector<Demonstration> demos_;
  std::map<std::pair<int, int>, double> observed_;
  std::vector<int> demos_per_cell_;
  int explored_count_ = 0;
  int action_cell_count_ = 0;
};

SceneGrid create_scene(std::string scene_id, int width, int height,
                       double cell_size_m,
                       const std::vector<std::pair<Cell, int>>& gt_labels,
                       ActivityVocabulary vocabulary = ActivityVocabulary());

// Everything stored in one scene document: the grid, localized camera poses
// and the per-cell side information (scene-class and object scores).
struct Scene {
  SceneGrid grid;
  std::vector<std::string> scene_class_names;
  std::vector<std::string> object_category_names;
  std::vector<ViewPose> poses;
  Eigen::MatrixXd scene_scores;   // cell_count x C
  Eigen::MatrixXd object_scores;  // cell_count x F

  int scene_class_count() const {
    return static_cast<int>(scene_scores.cols());
  }
  int object_category_count() const {
    return static_cast<int>(object_scores.cols());
  }

  bool operator==(const Scene& other) const;
};

// Row index of the global Action Map matrix over several stacked scenes.
class GlobalIndex {
 public:
  struct Entry {
    int scene = 0;
    Cell cell;

    bool operator==(const Entry&) const = default;
  };

  int size() const { return static_cast<int>(entries_.size()); }
  int scene_count() const { return static_cast<int>(offsets_.size()); }
  const Entry& entry(int row) const { return entries_.at(row); }
  int row(int scene, Cell cell) const;
  int offset(int scene) const { return offsets_.at(scene); }
  int scene_rows(int scene) const { return counts_.at(scene); }
  const std::vector<int>& offsets() const { return offsets_; }

 private:
  friend GlobalIndex stack_scenes(const std::vector<const SceneGrid*>&);

  std::vector<Entry> entries_;
  std::vector<int> offsets_;
  std::vector<int> counts_;
  std::vector<int> widths_;
};

// Scenes in the given order, each scene's cells row-major. Every cell of the
// bounding box is a row; unexplored cells simply carry zero weight.
GlobalIndex stack_scenes(const std::vector<const SceneGrid*>& scenes);

std::vector<const SceneGrid*> grids_of(const std::vector<Scene>& scenes);

}  // namespace actionmap

#endif  // ACTIONMAP_SCENE_MODEL_H_
