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

#include "confctl/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "confctl/csv.hpp"
#include "confctl/parallel.hpp"

namespace confctl {

namespace {

// Stream tags keep the sub-streams of different studies disjoint.
constexpr std::uint32_t kToolTag = 0x544F4F4C;    // "TOOL"
constexpr std::uint32_t kGridTag = 0x47524944;    // "GRID"
constexpr std::uint32_t kBenchTag = 0x424E4348;   // "BNCH"
constexpr std::uint32_t kBootTag = 0x424F4F54;    // "BOOT"

std::uint64_t trial_seed(std::uint64_t seed, std::uint32_t tag, int trial) {
  return make_stream(seed, tag, trial)();
}

std::optional<stats::BootstrapInterval> bootstrap_ci(
    std::span<const double> xs, std::span<const double> ys,
    std::uint64_t seed, int salt) {
  const std::uint64_t s = make_stream(seed, kBootTag, salt)();
  return stats::bootstrap_spearman_interval(xs, ys, 1000, s);
}

std::optional<double> maybe_cv(const std::vector<double>& xs) {
  if (xs.size() < 2 || stats::mean(xs) == 0.0) return std::nullopt;
  return stats::coefficient_of_variation(xs);
}

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  return out;
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t tag,
                            int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), tag,
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  const double u =
      static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + (hi - lo) * u;
}

std::vector<ToolSample> sample_tools(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_tools: n must be >= 1");
  std::vector<ToolSample> tools(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 gen = make_stream(seed, kToolTag, i);
    ToolSample& t = tools[static_cast<std::size_t>(i)];
    t.id = i;
    t.master_seed = seed;
    t.draw_index = i;
    t.params.m1 = uniform(gen, 0.1, 0.6);
    t.params.m2 = uniform(gen, 0.1, 0.6);
    t.params.l1 = uniform(gen, 0.1, 0.6);
    t.params.l2 = uniform(gen, 0.1, 0.6);
  }
  return tools;
}

double task_error(const Trajectory& traj, const TaskSpec& task) {
  double sum = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    Vec2d d;
    const Mat2d* p = nullptr;
    switch (task.kind) {
      case TaskKind::position:
        d = traj.x[k].head<2>() - task.theta_goal;
        p = &task.p_theta;
        break;
      case TaskKind::velocity:
        d = traj.x[k].tail<2>() - task.theta_dot_goal;
        p = &task.p_theta_dot;
        break;
      case TaskKind::acceleration:
        d = traj.theta_ddot[k] - task.theta_ddot_goal;
        p = &task.p_theta_ddot;
        break;
    }
    sum += d.dot(*p * d);
  }
  return sum;
}

SensitivityOutcome perturbation_sensitivity(const ToolSample& tool,
                                            const TaskSpec& task,
                                            const Vec2d& delta_t,
                                            const SimConfig& cfg) {
  SensitivityOutcome out;
  const StateSpaced ss = linearize(tool.params);
  const SimResult base = simulate(tool.params, ss, task, cfg, Vec2d::Zero());
  if (!base.ok()) {
    out.status = base.status;
    return out;
  }
  const SimResult pert = simulate(tool.params, ss, task, cfg, delta_t);
  if (!pert.ok()) {
    out.status = pert.status;
    return out;
  }
  out.unperturbed_error = task_error(base.trajectory, task);
  out.perturbed_error = task_error(pert.trajectory, task);
  out.sensitivity = std::abs(out.perturbed_error - out.unperturbed_error);
  return out;
}

ConfVsErrorStudy run_confidence_vs_error(int n,
                                         std::span<const TaskKind> tasks,
                                         std::uint64_t seed,
                                         const SimConfig& cfg, int jobs) {
  ConfVsErrorStudy study;
  study.seed = seed;
  const std::vector<ToolSample> tools = sample_tools(n, seed);

  for (const TaskKind kind : tasks) {
    const TaskSpec task = default_task(kind);
    std::vector<ExperimentRecord> rows(tools.size());
    parallel_for(tools.size(), jobs, [&](std::size_t i) {
      const ToolSample& tool = tools[i];
      ExperimentRecord& r = rows[i];
      r.seed = seed;
      r.task = task_number(kind);
      r.tool_id = tool.id;
      const StateSpaced ss = linearize(tool.params);
      const ControlConfidence conf = control_confidence(kind, ss, task);
      r.logdet_confidence = conf.logdet;
      if (!conf.positive_definite) {
        r.status = ToolStatus::singular_confidence;
        return;
      }
      const SimResult sim = simulate(tool.params, ss, task, cfg, Vec2d::Zero());
      if (!sim.ok()) {
        r.status = ToolStatus::integration_failure;
        return;
      }
      r.task_error = task_error(sim.trajectory, task);
    });

    CorrelationSummary s;
    s.task = task_number(kind);
    std::vector<double> lds, errs;
    for (const ExperimentRecord& r : rows) {
      if (r.status == ToolStatus::ok && r.task_error) {
        lds.push_back(r.logdet_confidence);
        errs.push_back(*r.task_error);
      }
    }
    s.n_valid = static_cast<int>(lds.size());
    s.n_excluded = n - s.n_valid;
    s.rho = stats::spearman(lds, errs);
    s.ci = bootstrap_ci(lds, errs, seed, task_number(kind));
    s.cv_logdet = maybe_cv(lds);
    s.cv_task_error = maybe_cv(errs);
    study.summaries.push_back(s);
    study.records.insert(study.records.end(), rows.begin(), rows.end());
  }
  return study;
}

PerturbationStudy run_perturbation_study(int n, double delta_t,
                                         std::span<const double> sweep,
                                         std::span<const TaskKind> tasks,
                                         std::uint64_t seed,
                                         const SimConfig& cfg, int jobs) {
  PerturbationStudy study;
  study.seed = seed;
  study.levels.push_back(delta_t);
  for (const double lv : sweep) {
    if (std::find(study.levels.begin(), study.levels.end(), lv) ==
        study.levels.end()) {
      study.levels.push_back(lv);
    }
  }

  const std::vector<ToolSample> tools = sample_tools(n, seed);

  for (const TaskKind kind : tasks) {
    const TaskSpec task = default_task(kind);
    // One row per (tool, level); all levels of a tool share its
    // unperturbed run.
    std::vector<std::vector<ExperimentRecord>> rows(
        tools.size(),
        std::vector<ExperimentRecord>(study.levels.size()));
    parallel_for(tools.size(), jobs, [&](std::size_t i) {
      const ToolSample& tool = tools[i];
      const StateSpaced ss = linearize(tool.params);
      const ControlConfidence conf = control_confidence(kind, ss, task);

      std::optional<double> base_error;
      ToolStatus base_status = ToolStatus::ok;
      if (!conf.positive_definite) {
        base_status = ToolStatus::singular_confidence;
      } else {
        const SimResult base =
            simulate(tool.params, ss, task, cfg, Vec2d::Zero());
        if (base.ok()) {
          base_error = task_error(base.trajectory, task);
        } else {
          base_status = ToolStatus::integration_failure;
        }
      }

      for (std::size_t lv = 0; lv < study.levels.size(); ++lv) {
        ExperimentRecord& r = rows[i][lv];
        r.seed = seed;
        r.task = task_number(kind);
        r.tool_id = tool.id;
        r.logdet_confidence = conf.logdet;
        r.perturbation_magnitude = study.levels[lv];
        r.status = base_status;
        if (base_status != ToolStatus::ok) continue;
        r.task_error = base_error;
        const double dt_lv = study.levels[lv];
        const SimResult pert =
            simulate(tool.params, ss, task, cfg, Vec2d(dt_lv, dt_lv));
        if (!pert.ok()) {
          r.status = ToolStatus::integration_failure;
          r.task_error.reset();
          continue;
        }
        r.perturbed_task_error = task_error(pert.trajectory, task);
      }
    });

    for (std::size_t lv = 0; lv < study.levels.size(); ++lv) {
      CorrelationSummary s;
      s.task = task_number(kind);
      s.perturbation_magnitude = study.levels[lv];
      std::vector<double> lds, sens;
      for (std::size_t i = 0; i < tools.size(); ++i) {
        const ExperimentRecord& r = rows[i][lv];
        if (r.status == ToolStatus::ok && r.task_error &&
            r.perturbed_task_error) {
          lds.push_back(r.logdet_confidence);
          sens.push_back(std::abs(*r.perturbed_task_error - *r.task_error));
        }
      }
      s.n_valid = static_cast<int>(lds.size());
      s.n_excluded = n - s.n_valid;
      s.rho = stats::spearman(lds, sens);
      s.ci = bootstrap_ci(lds, sens, seed,
                          100 * task_number(kind) + static_cast<int>(lv));
      if (!sens.empty()) {
        s.median_sensitivity = stats::median(sens);
        s.iqr_sensitivity = stats::iqr(sens);
      }
      study.summaries.push_back(s);
    }
    for (std::size_t i = 0; i < tools.size(); ++i) {
      study.records.insert(study.records.end(), rows[i].begin(),
                           rows[i].end());
    }
  }
  return study;
}

SelectionGridStudy run_selection_grid(int trials, int toolset_size,
                                      TaskKind kind, std::uint64_t seed,
                                      const SimConfig& cfg, int jobs) {
  SelectionGridStudy study;
  study.seed = seed;
  study.task = task_number(kind);
  study.trials = trials;
  study.toolset_size = toolset_size;
  const TaskSpec task = default_task(kind);

  std::vector<std::vector<GridCell>> per_trial(
      static_cast<std::size_t>(trials));
  std::vector<char> skipped(static_cast<std::size_t>(trials), 0);

  parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    const std::vector<ToolSample> tools =
        sample_tools(toolset_size, trial_seed(seed, kGridTag,
                                              static_cast<int>(t)));
    std::vector<ArmParamsd> params;
    params.reserve(tools.size());
    for (const ToolSample& tool : tools) params.push_back(tool.params);

    std::vector<GridCell>& cells = per_trial[t];
    cells.resize(tools.size());
    try {
      const SelectionReport rep_f =
          select_tool(params, task, Objective::free_energy, cfg, 1);
      const SelectionReport rep_j =
          select_tool(params, task, Objective::quadratic, cfg, 1);
      for (std::size_t i = 0; i < tools.size(); ++i) {
        GridCell& c = cells[i];
        c.trial = static_cast<int>(t);
        c.tool_id = static_cast<int>(i);
        c.logdet = rep_f.tools[i].logdet;
        c.objective_f = rep_f.tools[i].objective_value;
        c.objective_j = rep_j.tools[i].objective_value;
        c.f_selected = rep_f.chosen_index == static_cast<int>(i);
        c.j_selected = rep_j.chosen_index == static_cast<int>(i);
        c.status = rep_f.tools[i].status;
      }
    } catch (const NoValidToolError&) {
      skipped[t] = 1;
      for (std::size_t i = 0; i < tools.size(); ++i) {
        cells[i].trial = static_cast<int>(t);
        cells[i].tool_id = static_cast<int>(i);
        cells[i].status = ToolStatus::integration_failure;
      }
    }
  });

  for (int t = 0; t < trials; ++t) {
    if (skipped[static_cast<std::size_t>(t)]) {
      ++study.skipped_trials;
    } else {
      const auto& cells = per_trial[static_cast<std::size_t>(t)];
      const bool agree =
          std::any_of(cells.begin(), cells.end(), [](const GridCell& c) {
            return c.f_selected && c.j_selected;
          });
      if (!agree) ++study.disagreements;
    }
    study.cells.insert(study.cells.end(),
                       per_trial[static_cast<std::size_t>(t)].begin(),
                       per_trial[static_cast<std::size_t>(t)].end());
  }
  return study;
}

BenchmarkStudy run_benchmark(int trials, int toolset_size, double delta_t,
                             TaskKind kind, std::uint64_t seed,
                             const SimConfig& cfg, int jobs) {
  BenchmarkStudy study;
  study.seed = seed;
  study.task = task_number(kind);
  study.delta_t = delta_t;
  study.trials = trials;
  study.toolset_size = toolset_size;
  const TaskSpec task = default_task(kind);
  const Vec2d dt_vec(delta_t, delta_t);
  constexpr Objective kObjectives[] = {Objective::free_energy,
                                       Objective::quadratic,
                                       Objective::confidence_only};

  std::vector<std::vector<BenchmarkChoice>> per_trial(
      static_cast<std::size_t>(trials));
  std::vector<char> skipped(static_cast<std::size_t>(trials), 0);

  parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    const std::vector<ToolSample> tools =
        sample_tools(toolset_size, trial_seed(seed, kBenchTag,
                                              static_cast<int>(t)));
    std::vector<ArmParamsd> params;
    params.reserve(tools.size());
    for (const ToolSample& tool : tools) params.push_back(tool.params);

    for (const Objective obj : kObjectives) {
      BenchmarkChoice choice;
      choice.trial = static_cast<int>(t);
      choice.objective = obj;
      choice.perturbation_magnitude = delta_t;
      try {
        const SelectionReport rep = select_tool(params, task, obj, cfg, 1);
        const ToolSample& chosen =
            tools[static_cast<std::size_t>(rep.chosen_index)];
        choice.tool_id = chosen.id;
        choice.logdet = rep.tools[rep.chosen_index].logdet;
        const SensitivityOutcome sens =
            perturbation_sensitivity(chosen, task, dt_vec, cfg);
        if (sens.ok()) {
          choice.task_error = sens.unperturbed_error;
          choice.perturbed_task_error = sens.perturbed_error;
        } else {
          choice.status = ToolStatus::integration_failure;
        }
      } catch (const NoValidToolError&) {
        skipped[t] = 1;
        choice.status = ToolStatus::integration_failure;
      }
      per_trial[t].push_back(choice);
    }
  });

  for (int t = 0; t < trials; ++t) {
    if (skipped[static_cast<std::size_t>(t)]) ++study.skipped_trials;
    study.choices.insert(study.choices.end(),
                         per_trial[static_cast<std::size_t>(t)].begin(),
                         per_trial[static_cast<std::size_t>(t)].end());
  }

  for (const Objective obj : kObjectives) {
    BenchmarkObjectiveSummary s;
    s.objective = obj;
    std::vector<double> lds, errs, deltas;
    for (const BenchmarkChoice& c : study.choices) {
      if (c.objective != obj || c.status != ToolStatus::ok) continue;
      if (!c.task_error || !c.perturbed_task_error) continue;
      lds.push_back(c.logdet);
      errs.push_back(*c.task_error);
      deltas.push_back(std::abs(*c.perturbed_task_error - *c.task_error));
    }
    s.n = static_cast<int>(lds.size());
    if (s.n > 0) {
      s.mean_logdet = stats::mean(lds);
      s.median_logdet = stats::median(lds);
      s.iqr_logdet = stats::iqr(lds);
      s.mean_task_error = stats::mean(errs);
      s.median_task_error = stats::median(errs);
      s.iqr_task_error = stats::iqr(errs);
      s.mean_abs_delta_error = stats::mean(deltas);
      s.median_abs_delta_error = stats::median(deltas);
      s.iqr_abs_delta_error = stats::iqr(deltas);
    }
    study.summaries.push_back(s);
  }
  return study;
}

void write_records_csv(const std::filesystem::path& path,
                       std::span<const ExperimentRecord> records) {
  std::ofstream out = open_csv(path);
  out << "seed,task,trial,tool_id,logdet_confidence,task_error,"
         "perturbed_task_error,perturbation_magnitude,status\n";
  for (const ExperimentRecord& r : records) {
    out << r.seed << ',' << r.task << ',' << r.trial << ',' << r.tool_id
        << ',' << csv::num(r.logdet_confidence) << ','
        << csv::num(r.task_error) << ',' << csv::num(r.perturbed_task_error)
        << ',' << csv::num(r.perturbation_magnitude) << ','
        << to_string(r.status) << '\n';
  }
}

void write_summaries_csv(const std::filesystem::path& path,
                         std::uint64_t seed,
                         std::span<const CorrelationSummary> summaries) {
  std::ofstream out = open_csv(path);
  out << "seed,task,perturbation_magnitude,n_valid,n_excluded,spearman_rho,"
         "ci_lo,ci_hi,cv_logdet,cv_task_error,median_sensitivity,"
         "iqr_sensitivity\n";
  for (const CorrelationSummary& s : summaries) {
    out << seed << ',' << s.task << ','
        << csv::num(s.perturbation_magnitude) << ',' << s.n_valid << ','
        << s.n_excluded << ',' << csv::num(s.rho) << ','
        << (s.ci ? csv::num(s.ci->lo) : std::string{}) << ','
        << (s.ci ? csv::num(s.ci->hi) : std::string{}) << ','
        << csv::num(s.cv_logdet) << ',' << csv::num(s.cv_task_error) << ','
        << csv::num(s.median_sensitivity) << ','
        << csv::num(s.iqr_sensitivity) << '\n';
  }
}

void write_grid_csv(const std::filesystem::path& path,
                    const SelectionGridStudy& study) {
  std::ofstream out = open_csv(path);
  out << "seed,task,trial,tool_id,logdet_confidence,objective_f,objective_j,"
         "f_selected,j_selected,status\n";
  for (const GridCell& c : study.cells) {
    out << study.seed << ',' << study.task << ',' << c.trial << ','
        << c.tool_id << ',' << csv::num(c.logdet) << ','
        << csv::num(c.objective_f) << ',' << csv::num(c.objective_j) << ','
        << (c.f_selected ? 1 : 0) << ',' << (c.j_selected ? 1 : 0) << ','
        << to_string(c.status) << '\n';
  }
}

void write_benchmark_csv(const std::filesystem::path& path,
                         const BenchmarkStudy& study) {
  std::ofstream out = open_csv(path);
  out << "seed,task,trial,objective,tool_id,logdet_confidence,task_error,"
         "perturbed_task_error,perturbation_magnitude,status\n";
  for (const BenchmarkChoice& c : study.choices) {
    out << study.seed << ',' << study.task << ',' << c.trial << ','
        << to_string(c.objective) << ',' << c.tool_id << ','
        << csv::num(c.logdet) << ',' << csv::num(c.task_error) << ','
        << csv::num(c.perturbed_task_error) << ','
        << csv::num(c.perturbation_magnitude) << ',' << to_string(c.status)
        << '\n';
  }
}

void write_benchmark_summary_csv(const std::filesystem::path& path,
                                 const BenchmarkStudy& study) {
  std::ofstream out = open_csv(path);
  out << "seed,task,objective,n_trials,mean_logdet,median_logdet,iqr_logdet,"
         "mean_task_error,median_task_error,iqr_task_error,"
         "mean_abs_delta_error,median_abs_delta_error,iqr_abs_delta_error\n";
  for (const BenchmarkObjectiveSummary& s : study.summaries) {
    out << study.seed << ',' << study.task << ',' << to_string(s.objective)
        << ',' << s.n << ',' << csv::num(s.mean_logdet) << ','
        << csv::num(s.median_logdet) << ',' << csv::num(s.iqr_logdet) << ','
        << csv::num(s.mean_task_error) << ','
        << csv::num(s.median_task_error) << ','
        << csv::num(s.iqr_task_error) << ','
        << csv::num(s.mean_abs_delta_error) << ','
        << csv::num(s.median_abs_delta_error) << ','
        << csv::num(s.iqr_abs_delta_error) << '\n';
  }
}

}  // namespace confctl
