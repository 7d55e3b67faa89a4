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

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "actionmap/error.h"
#include "actionmap/experiments.h"
#include "actionmap/io.h"
#include "actionmap/localization.h"
#include "actionmap/synthetic.h"

namespace fs = std::filesystem;
using namespace actionmap;

namespace {

struct Options {
  io::RunConfig config;
  std::string config_path;
  std::string preset = "experiment";
  std::string factors_path;
  std::string map_path;
  std::string variant_name = "SOP";
  std::vector<std::string> grid_variants;
  std::vector<int> novel_scenes;
  std::vector<int> eval_scenes;
  int scene = 0;
};

std::string out_path(const Options& o, const std::string& name) {
  return (fs::path(o.config.output_dir) / name).string();
}

std::string to_text(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

void write_output(const Options& o, const std::string& name,
                  const std::function<void(std::ostream&)>& writer) {
  io::write_file(out_path(o, name), to_text(writer));
}

// Flags first, then the config file on top.
void finalize(Options& o) {
  if (o.preset == "office-a") {
    o.config.world = synthetic::office_a_like_spec(o.config.seed);
  } else if (o.preset != "experiment") {
    throw Error("unknown preset '" + o.preset + "'");
  }
  o.config.kernel.variant = parse_kernel_variant(o.variant_name);
  if (!o.grid_variants.empty()) {
    o.config.grid.variants.clear();
    for (const auto& v : o.grid_variants) {
      o.config.grid.variants.push_back(parse_kernel_variant(v));
    }
  }
  if (!o.config_path.empty()) {
    io::apply_json_config(io::read_file(o.config_path), o.config,
                          o.config_path);
  }
  o.config.validate();
  fs::create_directories(o.config.output_dir);
}

io::Dataset load(const Options& o) {
  if (o.config.dataset.empty()) throw Error("no dataset given (--dataset)");
  return io::load_dataset(o.config.dataset);
}

std::vector<bool> observed_flags(const Options& o, int scenes) {
  std::vector<bool> flags(scenes, true);
  for (int s : o.novel_scenes) {
    if (s < 0 || s >= scenes) throw Error("novel scene index out of range");
    flags[s] = false;
  }
  return flags;
}

void check_scenes(const std::vector<int>& list, int scenes, const char* what) {
  for (int s : list) {
    if (s < 0 || s >= scenes) {
      throw Error(std::string(what) + " scene index " + std::to_string(s) +
                  " out of range");
    }
  }
}

ExperimentSetup make_setup(const Options& o, const io::Dataset& d) {
  ExperimentSetup setup;
  setup.scenes = d.scenes;
  setup.activity_observed = observed_flags(o, static_cast<int>(d.scenes.size()));
  check_scenes(o.eval_scenes, static_cast<int>(d.scenes.size()), "evaluation");
  setup.eval_scenes = o.eval_scenes;
  setup.solver = o.config.solver;
  setup.kernel = o.config.kernel;
  setup.view = o.config.view;
  setup.threads = o.config.threads;
  return setup;
}

void cmd_generate(Options& o) {
  io::Dataset d;
  std::vector<synthetic::WorldSpec> specs;
  for (int i = 0; i < o.config.scene_count; ++i) {
    synthetic::WorldSpec spec = o.config.world;
    spec.seed = o.config.seed * 1000 + static_cast<uint64_t>(i);
    spec.scene_id = o.config.world.scene_id + "_" + std::to_string(i);
    specs.push_back(spec);
  }
  const auto generated = synthetic::generate_dataset(specs);
  d.scenes = generated.plain_scenes();
  d.category_map = generated.category_map;
  io::save_dataset(out_path(o, "dataset.txt"), d);
  write_output(o, "category_map.txt",
               [&](std::ostream& out) { io::write_category_map(out, d.category_map); });
  for (const Scene& s : d.scenes) {
    const SceneStats st = s.grid.recompute_stats();
    std::cout << s.grid.scene_id() << ": " << s.grid.width() << "x"
              << s.grid.height() << " cells, r_e "
              << io::format_number(st.explored_ratio) << ", r_a "
              << io::format_number(st.action_ratio) << ", "
              << s.grid.demonstrations().size() << " demonstrations, "
              << s.poses.size() << " images\n";
  }
}

void cmd_fit(Options& o) {
  const io::Dataset d = load(o);
  const auto flags = observed_flags(o, static_cast<int>(d.scenes.size()));
  const ActionMapFit f =
      fit_action_map(d.scenes, flags, o.config.kernel, o.config.solver);
  io::save_factors(out_path(o, "factors.txt"), f.fit.factors);
  write_output(o, "trace.csv",
               [&](std::ostream& out) { io::write_trace(out, f.fit.trace); });
  std::cout << "iterations " << f.fit.iterations << ", final objective "
            << io::format_number(f.fit.trace.back())
            << (f.fit.converged ? ", converged\n" : ", iteration limit\n");
}

void cmd_predict(Options& o) {
  const io::Dataset d = load(o);
  const std::string path =
      o.factors_path.empty() ? out_path(o, "factors.txt") : o.factors_path;
  const FactorPair factors = io::load_factors(path);
  const GlobalIndex index = stack_scenes(grids_of(d.scenes));
  if (factors.u.rows() != index.size() ||
      factors.v.rows() != d.scenes.front().grid.activity_count()) {
    throw Error(path + ": factors do not match the dataset");
  }
  const Eigen::MatrixXd map = action_map_from_factors(factors);
  write_output(o, "am.csv", [&](std::ostream& out) {
    io::write_action_map(out, map, index, d.scenes);
  });
  std::cout << "wrote " << index.size() << " rows\n";
}

Eigen::MatrixXd load_map(const Options& o, const io::Dataset& d,
                         const GlobalIndex& index) {
  const std::string path = o.map_path.empty() ? out_path(o, "am.csv") : o.map_path;
  Eigen::MatrixXd map = io::load_action_map(path, index, d.scenes);
  if (map.minCoeff() < 0.0 || map.maxCoeff() > 1.0) {
    throw Error(path + ": action map values must lie in [0, 1]");
  }
  return map;
}

void cmd_evaluate(Options& o) {
  const io::Dataset d = load(o);
  const GlobalIndex index = stack_scenes(grids_of(d.scenes));
  const Eigen::MatrixXd map = load_map(o, d, index);
  const ExperimentSetup setup = make_setup(o, d);
  const EvalResult r = evaluate_action_map(map, index, d.scenes,
                                           setup.evaluated_scenes(), o.config.view);
  const auto& vocab = d.scenes.front().grid.vocabulary();
  write_output(o, "report.csv",
               [&](std::ostream& out) { io::write_eval_report(out, r, vocab); });
  io::write_eval_summary(std::cout, r, vocab);
}

std::vector<MethodStats> variant_rows(const GridReport& report) {
  std::vector<MethodStats> rows;
  for (size_t v = 0; v < report.variants.size(); ++v) {
    rows.push_back({to_string(report.variants[v]), report.stats[v]});
  }
  return rows;
}

void cmd_grid(Options& o) {
  const io::Dataset d = load(o);
  const GridReport report = run_parameter_grid(make_setup(o, d), o.config.grid);
  const auto rows = variant_rows(report);
  write_output(o, "grid_runs.csv",
               [&](std::ostream& out) { io::write_grid_runs(out, report); });
  write_output(o, "grid_summary.csv",
               [&](std::ostream& out) { io::write_method_table(out, rows); });
  int failed = 0;
  for (const RunRecord& r : report.runs) failed += r.ok ? 0 : 1;
  std::cout << report.runs.size() << " runs, " << failed << " failed\n";
  io::write_method_summary(std::cout, rows);
}

void cmd_transfer(Options& o) {
  const io::Dataset d = load(o);
  const int n = static_cast<int>(d.scenes.size());
  check_scenes(o.config.source_scenes, n, "source");
  check_scenes(o.config.target_scenes, n, "target");
  ExperimentSetup setup = make_setup(o, d);
  setup.activity_observed.assign(n, false);
  for (int s : o.config.source_scenes) setup.activity_observed[s] = true;
  for (int t : o.config.target_scenes) {
    if (setup.activity_observed[t]) {
      throw Error("scene " + std::to_string(t) + " is both source and target");
    }
  }
  setup.eval_scenes = o.config.target_scenes;
  GridSpec grid = o.config.grid;
  std::erase(grid.variants, KernelVariant::kS);
  if (grid.variants.empty()) throw Error("transfer needs an appearance variant");
  const auto rows = run_transfer(setup, d.category_map, grid);
  write_output(o, "transfer.csv",
               [&](std::ostream& out) { io::write_method_table(out, rows); });
  io::write_method_summary(std::cout, rows);
}

void cmd_elapse(Options& o) {
  const io::Dataset d = load(o);
  const auto points = run_elapse(make_setup(o, d), o.config.grid,
                                 o.config.fractions, o.config.seed);
  const auto& vocab = d.scenes.front().grid.vocabulary();
  write_output(o, "elapse.csv",
               [&](std::ostream& out) { io::write_elapse(out, points, vocab); });
  for (const ElapsePoint& p : points) {
    std::cout << "fraction " << io::format_number(p.fraction) << ": "
              << p.demonstrations << " demonstrations, W. Mean F1 "
              << io::format_number(p.stats.mean.weighted_mean_f1)
              << ", Mean F1 " << io::format_number(p.stats.mean.mean_f1)
              << '\n';
  }
}

Eigen::MatrixXd scene_rows(const Eigen::MatrixXd& map, const GlobalIndex& index,
                           int scene) {
  return map.middleRows(index.offset(scene), index.scene_rows(scene));
}

void cmd_localize(Options& o) {
  const io::Dataset d = load(o);
  check_scenes({o.scene}, static_cast<int>(d.scenes.size()), "localization");
  const GlobalIndex index = stack_scenes(grids_of(d.scenes));
  const Eigen::MatrixXd map = load_map(o, d, index);
  const SceneGrid& grid = d.scenes[o.scene].grid;
  const auto queries = label_queries(grid, o.config.k_max);
  if (queries.empty()) throw Error("scene has no labelled cells to localize");
  const DiscrepancyCurve curve = discrepancy_curve(
      scene_rows(map, index, o.scene), grid.width(), queries, o.config.k_max);
  write_output(o, "discrepancy.csv", [&](std::ostream& out) {
    io::write_discrepancy(out, curve, grid.vocabulary());
  });
  for (size_t i = 0; i < curve.activities.size(); ++i) {
    const int k = first_k_below(curve.per_activity[i], 2.0);
    std::cout << grid.vocabulary().name(curve.activities[i]) << ": "
              << grid.label_cell_count(curve.activities[i])
              << " labelled cells, discrepancy < 2 at K = "
              << (k ? std::to_string(k) : std::string("never")) << '\n';
  }
}

void cmd_export_heatmap(Options& o) {
  const io::Dataset d = load(o);
  const GlobalIndex index = stack_scenes(grids_of(d.scenes));
  const Eigen::MatrixXd map = load_map(o, d, index);
  int images = 0;
  for (int s = 0; s < static_cast<int>(d.scenes.size()); ++s) {
    const SceneGrid& grid = d.scenes[s].grid;
    const Eigen::MatrixXd rows = scene_rows(map, index, s);
    for (int a = 0; a < grid.activity_count(); ++a) {
      write_output(o, "heatmap_" + grid.scene_id() + "_" +
                          grid.vocabulary().name(a) + ".pgm",
                   [&](std::ostream& out) {
                     io::write_pgm(out, rows.col(a), grid.width(), grid.height());
                   });
      ++images;
    }
  }
  write_output(o, "heatmap_table.csv", [&](std::ostream& out) {
    io::write_action_map(out, map, index, d.scenes);
  });
  std::cout << "wrote " << images << " heatmaps\n";
}

void add_common(CLI::App* cmd, Options& o) {
  auto& c = o.config;
  cmd->add_option("--config", o.config_path, "JSON config; overrides flags");
  cmd->add_option("-o,--output-dir", c.output_dir, "Output directory");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--threads", c.threads, "Worker threads");
}

void add_dataset(CLI::App* cmd, Options& o) {
  cmd->add_option("-d,--dataset", o.config.dataset, "Dataset document");
}

void add_solver(CLI::App* cmd, Options& o) {
  auto& s = o.config.solver;
  auto& k = o.config.kernel;
  cmd->add_option("--rank", s.rank, "Latent rank D");
  cmd->add_option("--lambda", s.lambda, "Location graph weight");
  cmd->add_option("--mu", s.mu, "Activity graph weight");
  cmd->add_option("--max-iters", s.max_iters, "Iteration limit");
  cmd->add_option("--rel-tol", s.rel_tol, "Relative objective tolerance");
  cmd->add_option("--alpha", k.alpha, "Appearance kernel share");
  cmd->add_option("--sigma-s", k.sigma_s, "Spatial bandwidth in cells");
  cmd->add_option("--gamma-p", k.gamma_p, "Scene-class chi-squared gamma");
  cmd->add_option("--gamma-o", k.gamma_o, "Object chi-squared gamma");
  cmd->add_option("--variant", o.variant_name, "S, SO, SP or SOP");
  cmd->add_option("--novel", o.novel_scenes,
                  "Scenes whose demonstrations are withheld");
}

void add_view(CLI::App* cmd, Options& o) {
  cmd->add_option("--fov", o.config.view.fov_deg, "View triangle angle");
  cmd->add_option("--range", o.config.view.range_cells,
                  "View triangle range in cells");
  cmd->add_option("--eval-scenes", o.eval_scenes, "Scenes to evaluate");
}

void add_grid(CLI::App* cmd, Options& o) {
  auto& g = o.config.grid;
  cmd->add_option("--alphas", g.alphas, "Grid alpha values");
  cmd->add_option("--lambdas", g.lambdas, "Grid lambda values");
  cmd->add_option("--gammas", g.gammas, "Grid gamma values");
  cmd->add_option("--variants", o.grid_variants, "Grid kernel variants");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Action Map completion from sparse activity demonstrations"};
  app.require_subcommand(1);
  Options o;

  std::vector<std::pair<CLI::App*, void (*)(Options&)>> commands;
  auto add = [&](const char* name, const char* help, void (*fn)(Options&)) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, o);
    commands.emplace_back(cmd, fn);
    return cmd;
  };

  auto* gen = add("generate", "Write a synthetic dataset", cmd_generate);
  gen->add_option("--scenes", o.config.scene_count, "Number of scenes");
  gen->add_option("--preset", o.preset, "experiment or office-a");

  auto* fit = add("fit", "Fit factors; writes factors and objective trace", cmd_fit);
  add_dataset(fit, o);
  add_solver(fit, o);

  auto* pred = add("predict", "Write the normalized Action Map", cmd_predict);
  add_dataset(pred, o);
  pred->add_option("--factors", o.factors_path, "Factor document");

  auto* eval = add("evaluate", "Score an Action Map against the labels", cmd_evaluate);
  add_dataset(eval, o);
  add_view(eval, o);
  eval->add_option("--map", o.map_path, "Action Map table");

  auto* grid = add("grid", "Run the parameter grid", cmd_grid);
  add_dataset(grid, o);
  add_solver(grid, o);
  add_view(grid, o);
  add_grid(grid, o);

  auto* transfer = add("transfer", "Predict novel scenes from source scenes", cmd_transfer);
  add_dataset(transfer, o);
  add_solver(transfer, o);
  add_view(transfer, o);
  add_grid(transfer, o);
  transfer->add_option("--source", o.config.source_scenes, "Source scenes");
  transfer->add_option("--target", o.config.target_scenes, "Target scenes");

  auto* elapse = add("elapse", "Sweep demonstration fractions", cmd_elapse);
  add_dataset(elapse, o);
  add_solver(elapse, o);
  add_view(elapse, o);
  add_grid(elapse, o);
  elapse->add_option("--fractions", o.config.fractions, "Demonstration fractions");

  auto* loc = add("localize", "K-best localization discrepancy", cmd_localize);
  add_dataset(loc, o);
  loc->add_option("--map", o.map_path, "Action Map table");
  loc->add_option("--scene", o.scene, "Scene index");
  loc->add_option("--k-max", o.config.k_max, "Largest K");

  auto* heat = add("export-heatmap", "Write greymap images per activity", cmd_export_heatmap);
  add_dataset(heat, o);
  heat->add_option("--map", o.map_path, "Action Map table");

  CLI11_PARSE(app, argc, argv);
  try {
    for (auto& [cmd, fn] : commands) {
      if (cmd->parsed()) {
        finalize(o);
        fn(o);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
