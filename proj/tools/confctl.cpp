// Copyright 2026 The confctl Authors
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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "confctl/config.hpp"
#include "confctl/csv.hpp"
#include "confctl/decision.hpp"
#include "confctl/experiments.hpp"
#include "confctl/svg.hpp"
#include "confctl/validation.hpp"

namespace {

namespace fs = std::filesystem;
using namespace confctl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CliArgs {
  std::optional<std::string> config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;

  // simulate / confidence
  std::vector<double> params;
  std::optional<std::uint64_t> tool_seed;
  int tool_index = 0;
  double perturb = 0.0;

  // select
  std::string toolset_path;
  std::string objective = "free-energy";

  // experiment
  std::string study;

  // validate
  bool inject_fault = false;
};

RunConfig resolve_config(const CliArgs& a) {
  RunConfig cfg = load_config(a.config_path, a.sets);
  if (a.seed) cfg.seed = *a.seed;
  if (a.out) cfg.out_dir = *a.out;
  if (a.jobs) cfg.jobs = *a.jobs;
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  return cfg;
}

ArmParamsd resolve_tool(const CliArgs& a, const RunConfig& cfg) {
  if (!a.params.empty()) {
    if (a.params.size() != 4) {
      throw ConfigError("--params expects m1,m2,l1,l2");
    }
    ArmParamsd p;
    p.m1 = a.params[0];
    p.m2 = a.params[1];
    p.l1 = a.params[2];
    p.l2 = a.params[3];
    require_valid(p);
    return p;
  }
  const std::uint64_t seed = a.tool_seed ? *a.tool_seed : cfg.seed;
  if (a.tool_index < 0) throw ConfigError("--tool-index must be >= 0");
  return sample_tools(a.tool_index + 1, seed)[a.tool_index].params;
}

Objective parse_objective(const std::string& s) {
  if (s == "free-energy" || s == "F") return Objective::free_energy;
  if (s == "quadratic" || s == "J") return Objective::quadratic;
  if (s == "confidence" || s == "C") return Objective::confidence_only;
  throw ConfigError("unknown objective '" + s +
                    "' (free-energy | quadratic | confidence)");
}

int cmd_simulate(const CliArgs& a) {
  const RunConfig cfg = resolve_config(a);
  const ArmParamsd tool = resolve_tool(a, cfg);
  const TaskSpec task = cfg.make_task();
  const StateSpaced ss = linearize(tool);
  const Vec2d perturbation(a.perturb, a.perturb);

  const SimResult sim = simulate(tool, ss, task, cfg.sim, perturbation);
  if (!sim.ok()) {
    std::cerr << "integration failed at t=" << sim.failure_time << "\n";
    return kExitNumerical;
  }

  const fs::path out = fs::path(cfg.out_dir) / "trajectory.csv";
  fs::create_directories(out.parent_path());
  std::ofstream os(out, std::ios::binary);
  os << "t,theta1,theta2,theta_dot1,theta_dot2,u1,u2,theta_ddot1,"
        "theta_ddot2,f\n";
  const Trajectory& tr = sim.trajectory;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    os << csv::num(tr.t[k]) << ',' << csv::num(tr.x[k][0]) << ','
       << csv::num(tr.x[k][1]) << ',' << csv::num(tr.x[k][2]) << ','
       << csv::num(tr.x[k][3]) << ',' << csv::num(tr.u[k][0]) << ','
       << csv::num(tr.u[k][1]) << ',' << csv::num(tr.theta_ddot[k][0]) << ','
       << csv::num(tr.theta_ddot[k][1]) << ',' << csv::num(tr.f[k]) << '\n';
  }
  os.close();

  const ControlConfidence conf = control_confidence(task.kind, ss, task);
  std::cout << "tool: m1=" << tool.m1 << " m2=" << tool.m2
            << " l1=" << tool.l1 << " l2=" << tool.l2 << "\n"
            << "samples: " << tr.size() << " -> " << out.string() << "\n"
            << "task_error: " << csv::num(task_error(tr, task)) << "\n"
            << "logdet_confidence: " << csv::num(conf.logdet) << "\n";
  return kExitOk;
}

int cmd_confidence(const CliArgs& a) {
  const RunConfig cfg = resolve_config(a);
  const ArmParamsd tool = resolve_tool(a, cfg);
  const TaskSpec task = cfg.make_task();
  const ControlConfidence conf =
      control_confidence(task.kind, linearize(tool), task);

  std::cout << "pi_u:\n"
            << "  [" << csv::num(conf.pi_u(0, 0)) << ", "
            << csv::num(conf.pi_u(0, 1)) << "]\n"
            << "  [" << csv::num(conf.pi_u(1, 0)) << ", "
            << csv::num(conf.pi_u(1, 1)) << "]\n";
  if (conf.positive_definite) {
    std::cout << "logdet_confidence: " << csv::num(conf.logdet) << "\n"
              << "w_correction: "
              << csv::num(w_correction(conf, conf.pi_u)) << "\n";
  } else {
    std::cout << "logdet_confidence: singular\n";
  }

  const fs::path out = fs::path(cfg.out_dir) / "confidence.csv";
  fs::create_directories(out.parent_path());
  std::ofstream os(out, std::ios::binary);
  os << "task,m1,m2,l1,l2,pi_00,pi_01,pi_10,pi_11,logdet_confidence,"
        "status\n"
     << task_number(task.kind) << ',' << csv::num(tool.m1) << ','
     << csv::num(tool.m2) << ',' << csv::num(tool.l1) << ','
     << csv::num(tool.l2) << ',' << csv::num(conf.pi_u(0, 0)) << ','
     << csv::num(conf.pi_u(0, 1)) << ',' << csv::num(conf.pi_u(1, 0)) << ','
     << csv::num(conf.pi_u(1, 1)) << ',' << csv::num(conf.logdet) << ','
     << (conf.positive_definite ? "ok" : "singular") << '\n';
  return kExitOk;
}

std::vector<ArmParamsd> read_toolset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open toolset file " + path);
  std::vector<ArmParamsd> tools;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      if (!cells.empty() && cells[0] == "id") continue;  // header
    }
    if (cells.size() != 5) {
      throw ConfigError("toolset line " + std::to_string(line_no) +
                        ": expected id,m1,m2,l1,l2");
    }
    try {
      ArmParamsd p;
      p.m1 = std::stod(cells[1]);
      p.m2 = std::stod(cells[2]);
      p.l1 = std::stod(cells[3]);
      p.l2 = std::stod(cells[4]);
      require_valid(p);
      tools.push_back(p);
    } catch (const std::exception& e) {
      throw ConfigError("toolset line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  if (tools.empty()) throw ConfigError("toolset file has no tools");
  return tools;
}

int cmd_select(const CliArgs& a) {
  const RunConfig cfg = resolve_config(a);
  const std::vector<ArmParamsd> tools = read_toolset(a.toolset_path);
  const TaskSpec task = cfg.make_task();
  const Objective objective = parse_objective(a.objective);

  const SelectionReport report =
      select_tool(tools, task, objective, cfg.sim, cfg.jobs);

  const fs::path out = fs::path(cfg.out_dir) / "selection_report.csv";
  fs::create_directories(out.parent_path());
  std::ofstream os(out, std::ios::binary);
  os << "task,objective,tool_id,objective_value,logdet_confidence,"
        "task_error,chosen,status\n";
  for (const ToolEvaluation& ev : report.tools) {
    os << task_number(task.kind) << ',' << to_string(objective) << ','
       << ev.tool_index << ',' << csv::num(ev.objective_value) << ','
       << csv::num(ev.logdet) << ',' << csv::num(ev.task_error) << ','
       << (ev.tool_index == report.chosen_index ? 1 : 0) << ','
       << to_string(ev.status) << '\n';
  }
  os.close();
  std::cout << "chosen_index: " << report.chosen_index << " -> "
            << out.string() << "\n";
  return kExitOk;
}

void print_correlation_summaries(
    const std::vector<CorrelationSummary>& summaries) {
  for (const CorrelationSummary& s : summaries) {
    std::cout << "task " << s.task;
    if (s.perturbation_magnitude) {
      std::cout << " dT=" << *s.perturbation_magnitude;
    }
    std::cout << ": n=" << s.n_valid << " excluded=" << s.n_excluded;
    if (s.rho) std::cout << " rho=" << *s.rho;
    if (s.ci) std::cout << " ci=[" << s.ci->lo << ", " << s.ci->hi << "]";
    if (s.cv_logdet) std::cout << " cv_logdet=" << *s.cv_logdet;
    if (s.cv_task_error) std::cout << " cv_error=" << *s.cv_task_error;
    if (s.iqr_sensitivity) std::cout << " iqr=" << *s.iqr_sensitivity;
    std::cout << "\n";
  }
}

int cmd_experiment(const CliArgs& a) {
  const RunConfig cfg = resolve_config(a);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  if (a.study == "conf-vs-error") {
    const TaskKind tasks[] = {TaskKind::position, TaskKind::velocity,
                              TaskKind::acceleration};
    const ConfVsErrorStudy study = run_confidence_vs_error(
        cfg.n_tools, tasks, cfg.seed, cfg.sim, cfg.jobs);
    write_records_csv(dir / "conf_vs_error.csv", study.records);
    write_summaries_csv(dir / "conf_vs_error_summary.csv", study.seed,
                        study.summaries);
    for (const TaskKind kind : tasks) {
      std::vector<std::pair<double, double>> pts;
      for (const ExperimentRecord& r : study.records) {
        if (r.task == task_number(kind) && r.task_error) {
          pts.emplace_back(r.logdet_confidence, *r.task_error);
        }
      }
      svg::write_scatter(
          dir / ("conf-vs-error_task" + std::to_string(task_number(kind)) +
                 ".svg"),
          pts, "task error vs control confidence", "logdet confidence",
          "task error");
    }
    print_correlation_summaries(study.summaries);
    return kExitOk;
  }

  if (a.study == "perturbation") {
    const TaskKind tasks[] = {TaskKind::position, TaskKind::velocity};
    const PerturbationStudy study = run_perturbation_study(
        cfg.n_perturbation_tools, cfg.delta_t, cfg.delta_t_sweep, tasks,
        cfg.seed, cfg.sim, cfg.jobs);
    write_records_csv(dir / "perturbation.csv", study.records);
    write_summaries_csv(dir / "perturbation_summary.csv", study.seed,
                        study.summaries);
    for (const TaskKind kind : tasks) {
      std::vector<std::pair<double, double>> pts;
      for (const ExperimentRecord& r : study.records) {
        if (r.task == task_number(kind) && r.task_error &&
            r.perturbed_task_error &&
            *r.perturbation_magnitude == cfg.delta_t) {
          pts.emplace_back(r.logdet_confidence,
                           std::abs(*r.perturbed_task_error - *r.task_error));
        }
      }
      svg::write_scatter(
          dir / ("perturbation_task" + std::to_string(task_number(kind)) +
                 ".svg"),
          pts, "perturbation sensitivity vs control confidence",
          "logdet confidence", "|delta task error|");
    }
    print_correlation_summaries(study.summaries);
    return kExitOk;
  }

  if (a.study == "selection-grid") {
    const SelectionGridStudy study =
        run_selection_grid(cfg.grid_trials, cfg.grid_toolset, cfg.task_kind,
                           cfg.seed, cfg.sim, cfg.jobs);
    write_grid_csv(dir / "selection_grid.csv", study);
    std::vector<std::pair<double, double>> pts;
    for (const GridCell& c : study.cells) {
      if (c.objective_f && c.objective_j) {
        pts.emplace_back(*c.objective_f, *c.objective_j);
      }
    }
    svg::write_scatter(
        dir / ("selection-grid_task" + std::to_string(study.task) + ".svg"),
        pts, "objective values per tool", "free-energy objective",
        "quadratic objective");
    std::cout << "trials=" << study.trials
              << " disagreements=" << study.disagreements
              << " skipped=" << study.skipped_trials << "\n";
    return kExitOk;
  }

  if (a.study == "benchmark") {
    const BenchmarkStudy study = run_benchmark(
        cfg.benchmark_trials, cfg.benchmark_toolset, cfg.delta_t,
        cfg.task_kind, cfg.seed, cfg.sim, cfg.jobs);
    write_benchmark_csv(dir / "benchmark.csv", study);
    write_benchmark_summary_csv(dir / "benchmark_summary.csv", study);
    std::vector<std::pair<double, double>> pts;
    for (const BenchmarkChoice& c : study.choices) {
      if (c.task_error && c.perturbed_task_error) {
        pts.emplace_back(c.logdet,
                         std::abs(*c.perturbed_task_error - *c.task_error));
      }
    }
    svg::write_scatter(
        dir / ("benchmark_task" + std::to_string(study.task) + ".svg"), pts,
        "sensitivity of selected tools", "logdet confidence",
        "|delta task error|");
    for (const BenchmarkObjectiveSummary& s : study.summaries) {
      std::cout << to_string(s.objective) << ": n=" << s.n
                << " mean_logdet=" << s.mean_logdet
                << " mean_error=" << s.mean_task_error
                << " mean_|derr|=" << s.mean_abs_delta_error << "\n";
    }
    return kExitOk;
  }

  throw ConfigError("unknown study '" + a.study +
                    "' (conf-vs-error | perturbation | selection-grid | "
                    "benchmark)");
}

int cmd_validate(const CliArgs& a) {
  const RunConfig cfg = resolve_config(a);
  const ValidationReport report = run_validation(cfg.seed, a.inject_fault);
  for (const ValidationCheck& c : report.checks) {
    std::printf("[%s] %-32s max_err=%.3e tol=%.1e  %s\n",
                c.passed ? "PASS" : "FAIL", c.name.c_str(), c.max_error,
                c.tolerance, c.detail.c_str());
  }
  return report.all_passed() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confidence-aware control simulation and tool selection"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name
  CliArgs args;

  app.add_option("--config", args.config_path, "key = value config file");
  app.add_option("--set", args.sets, "override one config key (repeatable)");
  app.add_option("--seed", args.seed, "master seed");
  app.add_option("--out", args.out, "output directory");
  app.add_option("--jobs", args.jobs, "parallel workers");

  auto* sim = app.add_subcommand(
      "simulate", "run one closed-loop simulation and write the trajectory");
  sim->add_option("--params", args.params, "tool as m1,m2,l1,l2")
      ->delimiter(',');
  sim->add_option("--tool-seed", args.tool_seed,
                  "seed to draw the tool from (default: master seed)");
  sim->add_option("--tool-index", args.tool_index, "draw index");
  sim->add_option("--perturb", args.perturb,
                  "constant torque added to both joints (Nm)");

  auto* conf = app.add_subcommand(
      "confidence", "print the posterior torque precision of one tool");
  conf->add_option("--params", args.params, "tool as m1,m2,l1,l2")
      ->delimiter(',');
  conf->add_option("--tool-seed", args.tool_seed, "seed to draw the tool");
  conf->add_option("--tool-index", args.tool_index, "draw index");

  auto* sel = app.add_subcommand(
      "select", "pick the best tool from a toolset CSV (id,m1,m2,l1,l2)");
  sel->add_option("--toolset", args.toolset_path, "toolset CSV path")
      ->required();
  sel->add_option("--objective", args.objective,
                  "free-energy | quadratic | confidence");

  auto* exp = app.add_subcommand("experiment", "run one randomized study");
  exp->add_option("study", args.study,
                  "conf-vs-error | perturbation | selection-grid | benchmark")
      ->required();

  auto* val = app.add_subcommand(
      "validate", "run the analytic identity self-checks");
  val->add_flag("--inject-fault", args.inject_fault,
                "perturb a closed-form constant to exercise the fail path")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(args);
    if (conf->parsed()) return cmd_confidence(args);
    if (sel->parsed()) return cmd_select(args);
    if (exp->parsed()) return cmd_experiment(args);
    if (val->parsed()) return cmd_validate(args);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoValidToolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
