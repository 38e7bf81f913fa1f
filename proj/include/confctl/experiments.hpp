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

#ifndef CONFCTL_EXPERIMENTS_HPP_
#define CONFCTL_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "confctl/decision.hpp"
#include "confctl/stats.hpp"

namespace confctl {

/// One randomly drawn tool together with its seed lineage, so any tool can
/// be regenerated from (master seed, draw index) alone.
struct ToolSample {
  int id = 0;
  ArmParamsd params;
  std::uint64_t master_seed = 0;
  int draw_index = 0;
};

/// Deterministic per-(seed, tag, index) generator. Every worker derives its
/// own stream, so results do not depend on scheduling order.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t tag, int index);

/// Uniform draw in [lo, hi) from the top 53 bits; bit-stable across
/// platforms, unlike the standard distributions.
double uniform(std::mt19937_64& gen, double lo, double hi);

/// n tools with each of {m1, m2, l1, l2} independently uniform in
/// [0.1, 0.6]; deterministic in seed.
std::vector<ToolSample> sample_tools(int n, std::uint64_t seed);

/// Precision-weighted squared deviation of the task variable from its goal,
/// summed over the output grid (angles for position tasks, velocities for
/// velocity tasks, accelerations for acceleration tasks).
double task_error(const Trajectory& traj, const TaskSpec& task);

struct SensitivityOutcome {
  ode::Status status = ode::Status::ok;
  double unperturbed_error = 0.0;
  double perturbed_error = 0.0;
  /// |perturbed - unperturbed|; zero exactly when delta_t is zero.
  double sensitivity = 0.0;

  bool ok() const { return status == ode::Status::ok; }
};

/// Runs the tool twice, without and with the constant perturbation torque
/// added to both joints in the plant, and reports the absolute change in
/// task error. Either simulation failing fails the outcome.
SensitivityOutcome perturbation_sensitivity(const ToolSample& tool,
                                            const TaskSpec& task,
                                            const Vec2d& delta_t,
                                            const SimConfig& cfg);

/// One CSV row; optional fields stay empty in studies that do not fill them.
struct ExperimentRecord {
  std::uint64_t seed = 0;
  int task = 0;
  int trial = 0;
  int tool_id = 0;
  double logdet_confidence = 0.0;
  std::optional<double> task_error;
  std::optional<double> perturbed_task_error;
  std::optional<double> perturbation_magnitude;
  ToolStatus status = ToolStatus::ok;
};

struct CorrelationSummary {
  int task = 0;
  std::optional<double> perturbation_magnitude;
  int n_valid = 0;
  int n_excluded = 0;
  std::optional<double> rho;
  std::optional<stats::BootstrapInterval> ci;
  std::optional<double> cv_logdet;
  std::optional<double> cv_task_error;
  std::optional<double> median_sensitivity;
  std::optional<double> iqr_sensitivity;
};

struct ConfVsErrorStudy {
  std::uint64_t seed = 0;
  std::vector<ExperimentRecord> records;
  std::vector<CorrelationSummary> summaries;
};

/// Unperturbed run of n sampled tools per task; pairs (logdet, task error)
/// plus Spearman rho with a bootstrap interval, and the dispersion
/// statistics used by the acceleration task (whose confidence is flat).
ConfVsErrorStudy run_confidence_vs_error(int n, std::span<const TaskKind> tasks,
                                         std::uint64_t seed,
                                         const SimConfig& cfg, int jobs);

struct PerturbationStudy {
  std::uint64_t seed = 0;
  std::vector<double> levels;
  std::vector<ExperimentRecord> records;
  std::vector<CorrelationSummary> summaries;
};

/// Sensitivity of n sampled tools per task and perturbation level. The
/// level list is delta_t followed by the sweep values (deduplicated,
/// order-preserving).
PerturbationStudy run_perturbation_study(int n, double delta_t,
                                         std::span<const double> sweep,
                                         std::span<const TaskKind> tasks,
                                         std::uint64_t seed,
                                         const SimConfig& cfg, int jobs);

struct GridCell {
  int trial = 0;
  int tool_id = 0;
  double logdet = 0.0;
  std::optional<double> objective_f;
  std::optional<double> objective_j;
  bool f_selected = false;
  bool j_selected = false;
  ToolStatus status = ToolStatus::ok;
};

struct SelectionGridStudy {
  std::uint64_t seed = 0;
  int task = 0;
  int trials = 0;
  int toolset_size = 0;
  std::vector<GridCell> cells;
  int disagreements = 0;
  int skipped_trials = 0;
};

/// Fresh random toolset per trial; records which tool the free-energy and
/// quadratic objectives each select.
SelectionGridStudy run_selection_grid(int trials, int toolset_size,
                                      TaskKind kind, std::uint64_t seed,
                                      const SimConfig& cfg, int jobs);

struct BenchmarkChoice {
  int trial = 0;
  Objective objective = Objective::free_energy;
  int tool_id = 0;
  double logdet = 0.0;
  std::optional<double> task_error;
  std::optional<double> perturbed_task_error;
  std::optional<double> perturbation_magnitude;
  ToolStatus status = ToolStatus::ok;
};

struct BenchmarkObjectiveSummary {
  Objective objective = Objective::free_energy;
  int n = 0;
  double mean_logdet = 0.0, median_logdet = 0.0, iqr_logdet = 0.0;
  double mean_task_error = 0.0, median_task_error = 0.0, iqr_task_error = 0.0;
  double mean_abs_delta_error = 0.0, median_abs_delta_error = 0.0,
         iqr_abs_delta_error = 0.0;
};

struct BenchmarkStudy {
  std::uint64_t seed = 0;
  int task = 0;
  double delta_t = 0.0;
  int trials = 0;
  int toolset_size = 0;
  std::vector<BenchmarkChoice> choices;
  std::vector<BenchmarkObjectiveSummary> summaries;
  int skipped_trials = 0;
};

/// Per trial, selects a tool with each of the three objectives and measures
/// the chosen tool's confidence, unperturbed task error and perturbation
/// sensitivity; aggregates per-objective means, medians and spreads.
BenchmarkStudy run_benchmark(int trials, int toolset_size, double delta_t,
                             TaskKind kind, std::uint64_t seed,
                             const SimConfig& cfg, int jobs);

// CSV emission. All floating-point cells use 17 significant digits; reruns
// with identical inputs produce byte-identical files.
void write_records_csv(const std::filesystem::path& path,
                       std::span<const ExperimentRecord> records);
void write_summaries_csv(const std::filesystem::path& path,
                         std::uint64_t seed,
                         std::span<const CorrelationSummary> summaries);
void write_grid_csv(const std::filesystem::path& path,
                    const SelectionGridStudy& study);
void write_benchmark_csv(const std::filesystem::path& path,
                         const BenchmarkStudy& study);
void write_benchmark_summary_csv(const std::filesystem::path& path,
                                 const BenchmarkStudy& study);

}  // namespace confctl

#endif  // CONFCTL_EXPERIMENTS_HPP_
