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

#ifndef ACTIONMAP_IO_H_
#define ACTIONMAP_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actionmap/baselines.h"
#include "actionmap/evaluation.h"
#include "actionmap/experiments.h"
#include "actionmap/localization.h"
#include "actionmap/rwnmf.h"
#include "actionmap/scene_model.h"
#include "actionmap/synthetic.h"

namespace actionmap::io {

inline constexpr int kSceneVersion = 1;
inline constexpr int kDatasetVersion = 1;
inline constexpr int kFactorsVersion = 1;
inline constexpr int kCategoryMapVersion = 1;

// Nearest double to v printed with 9 significant digits.
double quantize(double v);
std::string format_number(double v);

struct Dataset {
  std::vector<Scene> scenes;
  CategoryActivityMap category_map;

  bool operator==(const Dataset&) const = default;
};

void write_scene(std::ostream& out, const Scene& scene);
Scene read_scene(std::istream& in, const std::string& source = "<input>");

void write_category_map(std::ostream& out, const CategoryActivityMap& map);
CategoryActivityMap read_category_map(std::istream& in,
                                      const std::string& source = "<input>");

void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in, const std::string& source = "<input>");
void save_dataset(const std::string& path, const Dataset& dataset);
Dataset load_dataset(const std::string& path);

void write_factors(std::ostream& out, const FactorPair& factors);
FactorPair read_factors(std::istream& in,
                        const std::string& source = "<input>");
void save_factors(const std::string& path, const FactorPair& factors);
FactorPair load_factors(const std::string& path);

// iteration,objective
void write_trace(std::ostream& out, const std::vector<double>& trace);

// scene,x,y,<activity names>; one line per global row.
void write_action_map(std::ostream& out, const Eigen::MatrixXd& map,
                      const GlobalIndex& index,
                      const std::vector<Scene>& scenes);
Eigen::MatrixXd read_action_map(std::istream& in, const GlobalIndex& index,
                                const std::vector<Scene>& scenes,
                                const std::string& source = "<input>");
Eigen::MatrixXd load_action_map(const std::string& path,
                                const GlobalIndex& index,
                                const std::vector<Scene>& scenes);

// activity,gt_images,max_f1,mean_f1 followed by the four summary columns.
void write_eval_report(std::ostream& out, const EvalResult& result,
                       const ActivityVocabulary& vocabulary);
void write_eval_summary(std::ostream& out, const EvalResult& result,
                        const ActivityVocabulary& vocabulary);

// method,runs,W. Max F1,W. Mean F1,W. Mean F1 stdev,Max F1,Mean F1,
// Mean F1 stdev. Max columns hold the cross-run maximum, Mean columns the
// cross-run mean.
void write_method_table(std::ostream& out,
                        const std::vector<MethodStats>& rows);
void write_method_summary(std::ostream& out,
                          const std::vector<MethodStats>& rows);

void write_grid_runs(std::ostream& out, const GridReport& report);
void write_elapse(std::ostream& out, const std::vector<ElapsePoint>& points,
                  const ActivityVocabulary& vocabulary);
// K,activity,mean_discrepancy with the aggregate under activity "all".
void write_discrepancy(std::ostream& out, const DiscrepancyCurve& curve,
                       const ActivityVocabulary& vocabulary);

// Plain greymap, one pixel per cell, grey = round(255 * value).
void write_pgm(std::ostream& out, const Eigen::VectorXd& values, int width,
               int height);

std::string read_file(const std::string& path);
// Writes atomically enough for our purposes: the whole string at once.
void write_file(const std::string& path, const std::string& contents);

struct RunConfig {
  std::string dataset;
  std::string output_dir = ".";
  uint64_t seed = 1;
  SolverParams solver;
  KernelConfig kernel;
  ViewParams view;
  GridSpec grid;
  synthetic::WorldSpec world;
  int scene_count = 1;
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<int> source_scenes = {0};
  std::vector<int> target_scenes = {1};
  int k_max = 50;
  int threads = 1;

  void validate() const;
};

// Overrides the fields present in a JSON document; unknown keys are errors.
void apply_json_config(const std::string& json_text, RunConfig& config,
                       const std::string& source = "<config>");

}  // namespace actionmap::io

#endif  // ACTIONMAP_IO_H_
