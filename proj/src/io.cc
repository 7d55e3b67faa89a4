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

#include "actionmap/io.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "actionmap/error.h"

namespace actionmap::io {
namespace {

// Full-token parse; unlike std::stod this accepts subnormal values.
bool parse_double(const std::string& s, double& out) {
  if (s.empty() || std::isspace(static_cast<unsigned char>(s[0]))) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Line-oriented reader that reports failures as "source:line: message".
class LineReader {
 public:
  LineReader(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string t;
      while (ss >> t) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    fail("unexpected end of input");
  }

  // Next line, which must start with `keyword` and have `count` tokens
  // after it (-1 for any).
  std::vector<std::string> expect(const std::string& keyword, int count) {
    auto tokens = next();
    if (tokens[0] != keyword) {
      fail("expected '" + keyword + "', found '" + tokens[0] + "'");
    }
    if (count >= 0 && static_cast<int>(tokens.size()) != count + 1) {
      fail("'" + keyword + "' expects " + std::to_string(count) + " values");
    }
    tokens.erase(tokens.begin());
    return tokens;
  }

  void header(const std::string& magic, int version) {
    auto tokens = next();
    if (tokens.size() != 2 || tokens[0] != magic) {
      fail("not an " + magic + " document");
    }
    if (to_int(tokens[1]) != version) {
      fail("unsupported " + magic + " version " + tokens[1] + " (expected " +
           std::to_string(version) + ")");
    }
  }

  int to_int(const std::string& s) {
    try {
      size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size() || v < INT32_MIN || v > INT32_MAX) throw 0;
      return static_cast<int>(v);
    } catch (...) {
      fail("malformed integer '" + s + "'");
    }
  }

  double to_double(const std::string& s) {
    double v = 0.0;
    if (!parse_double(s, v)) fail("malformed number '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(source_ + ":" + std::to_string(line_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

void check_token(const std::string& name, const std::string& what) {
  if (name.empty() ||
      name.find_first_of(" \t\r\n,") != std::string::npos) {
    throw Error(what + " '" + name + "' must be non-empty without spaces or commas");
  }
}

void write_names(std::ostream& out, const std::string& key,
                 const std::vector<std::string>& names) {
  out << key << ' ' << names.size();
  for (const auto& n : names) {
    check_token(n, key);
    out << ' ' << n;
  }
  out << '\n';
}

std::vector<std::string> read_names(LineReader& r, const std::string& key) {
  auto tokens = r.expect(key, -1);
  if (tokens.empty()) r.fail("'" + key + "' needs a count");
  const int n = r.to_int(tokens[0]);
  if (n < 0 || static_cast<int>(tokens.size()) != n + 1) {
    r.fail("'" + key + "' lists " + std::to_string(tokens.size() - 1) +
           " names, expected " + tokens[0]);
  }
  return {tokens.begin() + 1, tokens.end()};
}

std::string csv_header(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + '\n';
}

const Scene& scene_of(const std::vector<Scene>& scenes, int s) {
  if (s < 0 || s >= static_cast<int>(scenes.size())) {
    throw Error("scene index out of range");
  }
  return scenes[s];
}

}  // namespace

double quantize(double v) {
  if (!std::isfinite(v)) return v;
  // strtod, unlike stod, accepts subnormal results.
  return std::strtod(format_number(v).c_str(), nullptr);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_scene(std::ostream& out, const Scene& scene) {
  const SceneGrid& g = scene.grid;
  const int cells = g.cell_count();
  if (scene.scene_scores.rows() != cells ||
      scene.object_scores.rows() != cells ||
      scene.scene_scores.cols() != scene.scene_class_count() ||
      scene.object_scores.cols() != scene.object_category_count()) {
    throw Error("scene '" + g.scene_id() +
                "' has features inconsistent with its grid");
  }
  check_token(g.scene_id(), "scene id");
  out << "actionmap-scene " << kSceneVersion << '\n';
  out << "scene_id " << g.scene_id() << '\n';
  out << "size " << g.width() << ' ' << g.height() << '\n';
  out << "cell_size_m " << format_number(g.cell_size_m()) << '\n';
  write_names(out, "activities", g.vocabulary().names());
  write_names(out, "scene_classes", scene.scene_class_names);
  write_names(out, "object_categories", scene.object_category_names);

  out << "explored\n";
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      out << (x ? " " : "") << (g.explored({x, y}) ? 1 : 0);
    }
    out << '\n';
  }

  int label_lines = 0;
  for (int i = 0; i < cells; ++i) {
    label_lines += static_cast<int>(g.labels(g.cell_at(i)).size());
  }
  out << "labels " << label_lines << '\n';
  for (int i = 0; i < cells; ++i) {
    const Cell c = g.cell_at(i);
    for (int a : g.labels(c)) out << c.x << ' ' << c.y << ' ' << a << '\n';
  }

  out << "demonstrations " << g.demonstrations().size() << '\n';
  for (const Demonstration& d : g.demonstrations()) {
    out << d.cell.x << ' ' << d.cell.y << ' ' << d.activity << ' '
        << format_number(d.value) << '\n';
  }

  out << "poses " << scene.poses.size() << '\n';
  for (const ViewPose& p : scene.poses) {
    out << format_number(p.position.x()) << ' ' << format_number(p.position.y())
        << ' ' << format_number(p.heading.x()) << ' '
        << format_number(p.heading.y()) << '\n';
  }

  out << "features " << cells << '\n';
  for (int i = 0; i < cells; ++i) {
    const Cell c = g.cell_at(i);
    out << c.x << ' ' << c.y;
    for (Eigen::Index k = 0; k < scene.scene_scores.cols(); ++k) {
      out << ' ' << format_number(scene.scene_scores(i, k));
    }
    for (Eigen::Index k = 0; k < scene.object_scores.cols(); ++k) {
      out << ' ' << format_number(scene.object_scores(i, k));
    }
    out << '\n';
  }
  out << "end\n";
}

namespace {

Scene read_scene_body(LineReader& r) {
  const auto id = r.expect("scene_id", 1);
  const auto size = r.expect("size", 2);
  const int width = r.to_int(size[0]);
  const int height = r.to_int(size[1]);
  if (width <= 0 || height <= 0) r.fail("grid size must be positive");
  const double cell_size = r.to_double(r.expect("cell_size_m", 1)[0]);
  if (!(cell_size > 0)) r.fail("cell size must be positive");
  auto activities = read_names(r, "activities");
  auto classes = read_names(r, "scene_classes");
  auto categories = read_names(r, "object_categories");

  std::optional<Scene> parsed;
  try {
    parsed.emplace(Scene{SceneGrid(id[0], width, height, cell_size,
                                   ActivityVocabulary(std::move(activities))),
                         {}, {}, {}, {}, {}});
  } catch (const Error& e) {
    r.fail(e.what());
  }
  Scene& scene = *parsed;
  SceneGrid& g = scene.grid;
  scene.scene_class_names = std::move(classes);
  scene.object_category_names = std::move(categories);

  r.expect("explored", 0);
  for (int y = 0; y < height; ++y) {
    const auto row = r.next();
    if (static_cast<int>(row.size()) != width) {
      r.fail("explored row needs " + std::to_string(width) + " entries");
    }
    for (int x = 0; x < width; ++x) {
      if (row[x] == "1") {
        g.mark_explored({x, y});
      } else if (row[x] != "0") {
        r.fail("explored entries must be 0 or 1");
      }
    }
  }

  auto checked_cell = [&](const std::string& xs, const std::string& ys) {
    const Cell c{r.to_int(xs), r.to_int(ys)};
    if (!g.contains(c)) r.fail("cell outside the grid");
    return c;
  };
  auto checked_activity = [&](const std::string& s) {
    const int a = r.to_int(s);
    if (a < 0 || a >= g.activity_count()) r.fail("activity out of range");
    return a;
  };

  const int labels = r.to_int(r.expect("labels", 1)[0]);
  for (int i = 0; i < labels; ++i) {
    const auto t = r.next();
    if (t.size() != 3) r.fail("label lines hold x y activity");
    g.add_label(checked_cell(t[0], t[1]), checked_activity(t[2]));
  }

  const int demos = r.to_int(r.expect("demonstrations", 1)[0]);
  for (int i = 0; i < demos; ++i) {
    const auto t = r.next();
    if (t.size() != 4) r.fail("demonstration lines hold x y activity value");
    const double value = r.to_double(t[3]);
    if (!(value > 0.0 && value <= 1.0)) {
      r.fail("demonstration value must lie in (0, 1]");
    }
    g.add_demonstration(
        {checked_cell(t[0], t[1]), checked_activity(t[2]), value});
  }

  const int poses = r.to_int(r.expect("poses", 1)[0]);
  for (int i = 0; i < poses; ++i) {
    const auto t = r.next();
    if (t.size() != 4) r.fail("pose lines hold px py hx hy");
    ViewPose p;
    p.position = {r.to_double(t[0]), r.to_double(t[1])};
    p.heading = {r.to_double(t[2]), r.to_double(t[3])};
    if (p.heading.norm() == 0.0) r.fail("pose heading must be non-zero");
    scene.poses.push_back(p);
  }

  const int cells = g.cell_count();
  const int C = static_cast<int>(scene.scene_class_names.size());
  const int F = static_cast<int>(scene.object_category_names.size());
  if (r.to_int(r.expect("features", 1)[0]) != cells) {
    r.fail("features must cover every cell");
  }
  scene.scene_scores.resize(cells, C);
  scene.object_scores.resize(cells, F);
  for (int i = 0; i < cells; ++i) {
    const auto t = r.next();
    if (static_cast<int>(t.size()) != 2 + C + F) {
      r.fail("feature lines hold x y and " + std::to_string(C + F) +
             " scores");
    }
    if (g.index(checked_cell(t[0], t[1])) != i) {
      r.fail("feature lines must follow row-major cell order");
    }
    for (int k = 0; k < C; ++k) {
      scene.scene_scores(i, k) = r.to_double(t[2 + k]);
      if (scene.scene_scores(i, k) < 0) r.fail("scores must be non-negative");
    }
    for (int k = 0; k < F; ++k) {
      scene.object_scores(i, k) = r.to_double(t[2 + C + k]);
      if (scene.object_scores(i, k) < 0) r.fail("scores must be non-negative");
    }
  }
  r.expect("end", 0);
  return std::move(*parsed);
}

CategoryActivityMap read_category_map_body(LineReader& r) {
  const int categories = r.to_int(r.expect("categories", 1)[0]);
  const int activities = r.to_int(r.expect("activities", 1)[0]);
  if (categories < 0 || activities < 0) r.fail("counts must be >= 0");
  CategoryActivityMap map(categories, activities);
  const int pairs = r.to_int(r.expect("pairs", 1)[0]);
  for (int i = 0; i < pairs; ++i) {
    const auto t = r.next();
    if (t.size() != 2) r.fail("pair lines hold category activity");
    try {
      map.add(r.to_int(t[0]), r.to_int(t[1]));
    } catch (const Error& e) {
      r.fail(e.what());
    }
  }
  r.expect("end", 0);
  return map;
}

}  // namespace

Scene read_scene(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("actionmap-scene", kSceneVersion);
  return read_scene_body(r);
}

void write_category_map(std::ostream& out, const CategoryActivityMap& map) {
  int pairs = 0;
  for (int f = 0; f < map.category_count(); ++f) {
    pairs += static_cast<int>(map.activities_for(f).size());
  }
  out << "actionmap-category-map " << kCategoryMapVersion << '\n'
      << "categories " << map.category_count() << '\n'
      << "activities " << map.activity_count() << '\n'
      << "pairs " << pairs << '\n';
  for (int f = 0; f < map.category_count(); ++f) {
    for (int a : map.activities_for(f)) out << f << ' ' << a << '\n';
  }
  out << "end\n";
}

CategoryActivityMap read_category_map(std::istream& in,
                                      const std::string& source) {
  LineReader r(in, source);
  r.header("actionmap-category-map", kCategoryMapVersion);
  return read_category_map_body(r);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "actionmap-dataset " << kDatasetVersion << '\n';
  out << "scenes " << dataset.scenes.size() << '\n';
  for (const Scene& s : dataset.scenes) write_scene(out, s);
  write_category_map(out, dataset.category_map);
}

Dataset read_dataset(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("actionmap-dataset", kDatasetVersion);
  const int n = r.to_int(r.expect("scenes", 1)[0]);
  if (n < 1) r.fail("a dataset holds at least one scene");
  Dataset d;
  for (int i = 0; i < n; ++i) {
    r.header("actionmap-scene", kSceneVersion);
    d.scenes.push_back(read_scene_body(r));
  }
  r.header("actionmap-category-map", kCategoryMapVersion);
  d.category_map = read_category_map_body(r);
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("failed writing '" + path + "'");
}

void save_dataset(const std::string& path, const Dataset& dataset) {
  std::ostringstream ss;
  write_dataset(ss, dataset);
  write_file(path, ss.str());
}

Dataset load_dataset(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_dataset(in, path);
}

void write_factors(std::ostream& out, const FactorPair& factors) {
  out << "actionmap-factors " << kFactorsVersion << '\n'
      << "rank " << factors.rank() << '\n';
  auto block = [&](const char* name, const Eigen::MatrixXd& m) {
    out << name << ' ' << m.rows() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        out << (k ? " " : "") << format_number(m(i, k));
      }
      out << '\n';
    }
  };
  block("u", factors.u);
  block("v", factors.v);
  out << "end\n";
}

FactorPair read_factors(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("actionmap-factors", kFactorsVersion);
  const int rank = r.to_int(r.expect("rank", 1)[0]);
  if (rank < 1) r.fail("rank must be >= 1");
  auto block = [&](const char* name) {
    const int rows = r.to_int(r.expect(name, 1)[0]);
    if (rows < 0) r.fail("row count must be >= 0");
    Eigen::MatrixXd m(rows, rank);
    for (int i = 0; i < rows; ++i) {
      const auto t = r.next();
      if (static_cast<int>(t.size()) != rank) {
        r.fail("factor rows hold " + std::to_string(rank) + " values");
      }
      for (int k = 0; k < rank; ++k) {
        m(i, k) = r.to_double(t[k]);
        if (m(i, k) < 0) r.fail("factors must be non-negative");
      }
    }
    return m;
  };
  FactorPair f;
  f.u = block("u");
  f.v = block("v");
  r.expect("end", 0);
  return f;
}

void save_factors(const std::string& path, const FactorPair& factors) {
  std::ostringstream ss;
  write_factors(ss, factors);
  write_file(path, ss.str());
}

FactorPair load_factors(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_factors(in, path);
}

void write_trace(std::ostream& out, const std::vector<double>& trace) {
  out << "iteration,objective\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << format_number(trace[i]) << '\n';
  }
}

void write_action_map(std::ostream& out, const Eigen::MatrixXd& map,
                      const GlobalIndex& index,
                      const std::vector<Scene>& scenes) {
  if (map.rows() != index.size() || scenes.empty() ||
      map.cols() != scenes.front().grid.activity_count()) {
    throw Error("action map does not match the dataset");
  }
  std::vector<std::string> header = {"scene", "x", "y"};
  for (const auto& n : scenes.front().grid.vocabulary().names()) {
    header.push_back(n);
  }
  out << csv_header(header);
  for (int row = 0; row < index.size(); ++row) {
    const auto& e = index.entry(row);
    out << scene_of(scenes, e.scene).grid.scene_id() << ',' << e.cell.x << ','
        << e.cell.y;
    for (Eigen::Index a = 0; a < map.cols(); ++a) {
      out << ',' << format_number(map(row, a));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_action_map(std::istream& in, const GlobalIndex& index,
                                const std::vector<Scene>& scenes,
                                const std::string& source) {
  if (scenes.empty()) throw Error("action map needs a dataset");
  const int A = scenes.front().grid.activity_count();
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& message) {
    throw Error(source + ":" + std::to_string(line_no) + ": " + message);
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
  };
  if (!std::getline(in, line)) fail("empty action map");
  ++line_no;
  if (static_cast<int>(split(line).size()) != 3 + A) {
    fail("header needs scene,x,y and one column per activity");
  }
  Eigen::MatrixXd map(index.size(), A);
  for (int row = 0; row < index.size(); ++row) {
    if (!std::getline(in, line)) fail("missing rows");
    ++line_no;
    const auto fields = split(line);
    if (static_cast<int>(fields.size()) != 3 + A) fail("wrong column count");
    const auto& e = index.entry(row);
    if (fields[0] != scenes[e.scene].grid.scene_id() ||
        fields[1] != std::to_string(e.cell.x) ||
        fields[2] != std::to_string(e.cell.y)) {
      fail("rows must follow the dataset's cell order");
    }
    for (int a = 0; a < A; ++a) {
      if (!parse_double(fields[3 + a], map(row, a))) {
        fail("malformed number '" + fields[3 + a] + "'");
      }
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      fail("trailing rows");
    }
  }
  return map;
}

Eigen::MatrixXd load_action_map(const std::string& path,
                                const GlobalIndex& index,
                                const std::vector<Scene>& scenes) {
  std::istringstream in(read_file(path));
  return read_action_map(in, index, scenes, path);
}

void write_eval_report(std::ostream& out, const EvalResult& result,
                       const ActivityVocabulary& vocabulary) {
  out << "activity,gt_images,max_f1,mean_f1\n";
  for (int a = 0; a < vocabulary.size(); ++a) {
    out << vocabulary.name(a) << ',' << result.gt_counts[a] << ','
        << format_number(result.max_f1[a]) << ','
        << format_number(result.mean_f1[a]) << '\n';
  }
  out << '\n' << csv_header({"images", kSummaryColumns[0], kSummaryColumns[1],
                             kSummaryColumns[2], kSummaryColumns[3]});
  out << result.image_count;
  for (double v : result.summary.as_vector()) out << ',' << format_number(v);
  out << '\n';
}

void write_eval_summary(std::ostream& out, const EvalResult& result,
                        const ActivityVocabulary& vocabulary) {
  out << "images: " << result.image_count << '\n';
  for (int a = 0; a < vocabulary.size(); ++a) {
    out << "  " << std::left << std::setw(18) << vocabulary.name(a)
        << " gt " << std::setw(5) << result.gt_counts[a] << " max F1 "
        << std::fixed << std::setprecision(3) << result.max_f1[a]
        << "  mean F1 " << result.mean_f1[a] << '\n';
  }
  const auto v = result.summary.as_vector();
  for (int k = 0; k < 4; ++k) {
    out << kSummaryColumns[k] << ": " << std::fixed << std::setprecision(3)
        << v[k] << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_method_table(std::ostream& out,
                        const std::vector<MethodStats>& rows) {
  out << "method,runs,W. Max F1,W. Mean F1,W. Mean F1 stdev,Max F1,Mean F1,"
         "Mean F1 stdev\n";
  for (const MethodStats& r : rows) {
    const CrossRunStats& s = r.stats;
    out << r.method << ',' << s.runs << ','
        << format_number(s.max.weighted_max_f1) << ','
        << format_number(s.mean.weighted_mean_f1) << ','
        << format_number(s.stdev.weighted_mean_f1) << ','
        << format_number(s.max.max_f1) << ',' << format_number(s.mean.mean_f1)
        << ',' << format_number(s.stdev.mean_f1) << '\n';
  }
}

void write_method_summary(std::ostream& out,
                          const std::vector<MethodStats>& rows) {
  out << std::left << std::setw(8) << "method" << std::right << std::setw(11)
      << "W. Max F1" << std::setw(20) << "W. Mean F1" << std::setw(10)
      << "Max F1" << std::setw(20) << "Mean F1" << '\n';
  out << std::fixed << std::setprecision(3);
  for (const MethodStats& r : rows) {
    const CrossRunStats& s = r.stats;
    std::ostringstream wmean, mean;
    wmean << std::fixed << std::setprecision(3) << s.mean.weighted_mean_f1;
    mean << std::fixed << std::setprecision(3) << s.mean.mean_f1;
    if (s.runs > 1) {
      wmean << " +- " << s.stdev.weighted_mean_f1;
      mean << " +- " << s.stdev.mean_f1;
    }
    out << std::left << std::setw(8) << r.method << std::right
        << std::setw(11) << s.max.weighted_max_f1 << std::setw(20)
        << wmean.str() << std::setw(10) << s.max.max_f1 << std::setw(20)
        << mean.str() << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

void write_grid_runs(std::ostream& out, const GridReport& report) {
  out << "variant,alpha,lambda,gamma,status,iterations,objective,W. Max F1,"
         "W. Mean F1,Max F1,Mean F1\n";
  for (const RunRecord& r : report.runs) {
    out << to_string(r.variant) << ',' << format_number(r.alpha) << ','
        << format_number(r.lambda) << ',' << format_number(r.gamma) << ','
        << (r.ok ? "ok" : "failed") << ',' << r.iterations << ','
        << format_number(r.final_objective);
    for (double v : r.result.summary.as_vector()) {
      out << ',' << format_number(v);
    }
    out << '\n';
  }
}

void write_elapse(std::ostream& out, const std::vector<ElapsePoint>& points,
                  const ActivityVocabulary& vocabulary) {
  std::vector<std::string> header = {"fraction", "demonstrations", "runs"};
  for (const char* c : kSummaryColumns) header.push_back(c);
  for (const auto& n : vocabulary.names()) header.push_back(n + " mean F1");
  out << csv_header(header);
  for (const ElapsePoint& p : points) {
    out << format_number(p.fraction) << ',' << p.demonstrations << ','
        << p.stats.runs;
    for (double v : p.stats.mean.as_vector()) out << ',' << format_number(v);
    for (int a = 0; a < vocabulary.size(); ++a) {
      const double v = a < static_cast<int>(p.mean_f1_per_activity.size())
                           ? p.mean_f1_per_activity[a]
                           : 0.0;
      out << ',' << format_number(v);
    }
    out << '\n';
  }
}

void write_discrepancy(std::ostream& out, const DiscrepancyCurve& curve,
                       const ActivityVocabulary& vocabulary) {
  out << "K,activity,mean_discrepancy\n";
  for (size_t i = 0; i < curve.activities.size(); ++i) {
    for (int k = 0; k < curve.k_max; ++k) {
      out << k + 1 << ',' << vocabulary.name(curve.activities[i]) << ','
          << format_number(curve.per_activity[i][k]) << '\n';
    }
  }
  for (int k = 0; k < curve.k_max; ++k) {
    out << k + 1 << ",all," << format_number(curve.aggregate[k]) << '\n';
  }
}

void write_pgm(std::ostream& out, const Eigen::VectorXd& values, int width,
               int height) {
  if (values.size() != static_cast<Eigen::Index>(width) * height) {
    throw Error("heatmap size does not match the grid");
  }
  out << "P2\n" << width << ' ' << height << "\n255\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = std::clamp(values[y * width + x], 0.0, 1.0);
      out << (x ? " " : "") << std::lround(255.0 * v);
    }
    out << '\n';
  }
}

void RunConfig::validate() const {
  solver.validate();
  kernel.validate();
  grid.validate();
  world.validate();
  ViewTriangle probe;
  probe.fov_deg = view.fov_deg;
  probe.range_cells = view.range_cells;
  probe.validate();
  if (scene_count < 1) throw Error("scene_count must be >= 1");
  if (k_max < 1) throw Error("k_max must be >= 1");
  if (threads < 1) throw Error("threads must be >= 1");
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error("fractions must lie in [0, 1]");
  }
}

namespace {

using nlohmann::json;

template <typename T>
void take(const json& obj, const char* key, T& field) {
  if (obj.contains(key)) field = obj.at(key).get<T>();
}

void check_keys(const json& obj, std::initializer_list<const char*> keys,
                const std::string& where) {
  if (!obj.is_object()) throw Error(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) throw Error("unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

void apply_json_config(const std::string& json_text, RunConfig& config,
                       const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(source + ": " + e.what());
  }
  try {
    check_keys(doc,
               {"dataset", "output_dir", "seed", "solver", "kernel", "view",
                "grid", "world", "scene_count", "fractions", "source_scenes",
                "target_scenes", "k_max", "threads"},
               "config");
    take(doc, "dataset", config.dataset);
    take(doc, "output_dir", config.output_dir);
    take(doc, "seed", config.seed);
    take(doc, "scene_count", config.scene_count);
    take(doc, "fractions", config.fractions);
    take(doc, "source_scenes", config.source_scenes);
    take(doc, "target_scenes", config.target_scenes);
    take(doc, "k_max", config.k_max);
    take(doc, "threads", config.threads);
    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      check_keys(s, {"rank", "lambda", "mu", "max_iters", "rel_tol",
                     "epsilon_stab"},
                 "solver");
      take(s, "rank", config.solver.rank);
      take(s, "lambda", config.solver.lambda);
      take(s, "mu", config.solver.mu);
      take(s, "max_iters", config.solver.max_iters);
      take(s, "rel_tol", config.solver.rel_tol);
      take(s, "epsilon_stab", config.solver.epsilon_stab);
    }
    if (doc.contains("kernel")) {
      const json& k = doc["kernel"];
      check_keys(k, {"alpha", "sigma_s", "gamma_p", "gamma_o", "variant",
                     "chi2_epsilon", "sparsify_threshold", "dense_limit"},
                 "kernel");
      take(k, "alpha", config.kernel.alpha);
      take(k, "sigma_s", config.kernel.sigma_s);
      take(k, "gamma_p", config.kernel.gamma_p);
      take(k, "gamma_o", config.kernel.gamma_o);
      take(k, "chi2_epsilon", config.kernel.chi2_epsilon);
      take(k, "sparsify_threshold", config.kernel.sparsify_threshold);
      take(k, "dense_limit", config.kernel.dense_limit);
      if (k.contains("variant")) {
        config.kernel.variant =
            parse_kernel_variant(k["variant"].get<std::string>());
      }
    }
    if (doc.contains("view")) {
      const json& v = doc["view"];
      check_keys(v, {"fov_deg", "range_cells"}, "view");
      take(v, "fov_deg", config.view.fov_deg);
      take(v, "range_cells", config.view.range_cells);
    }
    if (doc.contains("grid")) {
      const json& g = doc["grid"];
      check_keys(g, {"alphas", "lambdas", "gammas", "variants"}, "grid");
      take(g, "alphas", config.grid.alphas);
      take(g, "lambdas", config.grid.lambdas);
      take(g, "gammas", config.grid.gammas);
      if (g.contains("variants")) {
        config.grid.variants.clear();
        for (const auto& name : g["variants"]) {
          config.grid.variants.push_back(
              parse_kernel_variant(name.get<std::string>()));
        }
      }
    }
    if (doc.contains("world")) {
      const json& w = doc["world"];
      synthetic::WorldSpec& s = config.world;
      check_keys(w,
                 {"scene_id", "width", "room_depth", "corridor_height",
                  "room_width_min", "room_width_max", "cell_size_m",
                  "office_weight", "meeting_weight", "kitchen_weight",
                  "lounge_weight", "scene_peak", "feature_smoothing",
                  "feature_noise", "detection_miss_rate", "false_detections",
                  "detection_jitter", "localization_jitter",
                  "target_explored_ratio", "demo_sessions", "demo_count",
                  "pose_density"},
                 "world");
      take(w, "scene_id", s.scene_id);
      take(w, "width", s.width);
      take(w, "room_depth", s.room_depth);
      take(w, "corridor_height", s.corridor_height);
      take(w, "room_width_min", s.room_width_min);
      take(w, "room_width_max", s.room_width_max);
      take(w, "cell_size_m", s.cell_size_m);
      take(w, "office_weight", s.office_weight);
      take(w, "meeting_weight", s.meeting_weight);
      take(w, "kitchen_weight", s.kitchen_weight);
      take(w, "lounge_weight", s.lounge_weight);
      take(w, "scene_peak", s.scene_peak);
      take(w, "feature_smoothing", s.feature_smoothing);
      take(w, "feature_noise", s.feature_noise);
      take(w, "detection_miss_rate", s.detection_miss_rate);
      take(w, "false_detections", s.false_detections);
      take(w, "detection_jitter", s.detection_jitter);
      take(w, "localization_jitter", s.localization_jitter);
      take(w, "target_explored_ratio", s.target_explored_ratio);
      take(w, "demo_sessions", s.demo_sessions);
      take(w, "demo_count", s.demo_count);
      take(w, "pose_density", s.pose_density);
    }
  } catch (const json::exception& e) {
    throw Error(source + ": " + e.what());
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
}

}  // namespace actionmap::io
