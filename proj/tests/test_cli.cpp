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

// End-to-end checks of the confctl binary: exit-code contract, CSV shapes,
// and byte-level determinism of study outputs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "confctl/confidence.hpp"
#include "confctl/experiments.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CONFCTL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) res.output += buf;
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "confctl_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    } catch (const std::exception&) {
      out.push_back(std::nan(""));  // non-numeric cell (e.g. status)
    }
  }
  return out;
}

}  // namespace

TEST_CASE("no arguments prints help and exits 1") {
  const RunResult res = run_cli("");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("simulate") != std::string::npos);
  CHECK(res.output.find("validate") != std::string::npos);
}

TEST_CASE("unknown options and bad config exit 1") {
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("simulate --no-such-flag").exit_code == 1);
  CHECK(run_cli("simulate --set bogus.key=1").exit_code == 1);
  CHECK(run_cli("simulate --config /does/not/exist.cfg").exit_code == 1);
  CHECK(run_cli("experiment no-such-study").exit_code == 1);
}

TEST_CASE("validate passes on a healthy build and fails under fault "
          "injection") {
  const RunResult ok = run_cli("validate");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("[PASS] equilibrium_zero_dynamics") !=
        std::string::npos);
  CHECK(ok.output.find("[FAIL]") == std::string::npos);

  const RunResult bad = run_cli("validate --inject-fault");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("[FAIL] closed_form_jacobians") != std::string::npos);
}

TEST_CASE("simulate writes the trajectory grid and reports the error") {
  const fs::path out = work_dir() / "sim";
  fs::remove_all(out);
  const RunResult res =
      run_cli("--out " + out.string() + " simulate --tool-seed 31");
  CHECK(res.exit_code == 0);
  const auto lines = read_lines(out / "trajectory.csv");
  REQUIRE(lines.size() == 102);  // header + 101 grid points
  CHECK(lines[0] ==
        "t,theta1,theta2,theta_dot1,theta_dot2,u1,u2,theta_ddot1,"
        "theta_ddot2,f");

  // Round trip: the reported task error equals a recomputation from the
  // CSV series.
  std::size_t pos = res.output.find("task_error: ");
  REQUIRE(pos != std::string::npos);
  const double reported =
      std::stod(res.output.substr(pos + std::string("task_error: ").size()));
  const confctl::TaskSpec task =
      confctl::default_task(confctl::TaskKind::velocity);
  double recomputed = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = split_doubles(lines[i]);
    const confctl::Vec2d d =
        confctl::Vec2d(v[3], v[4]) - task.theta_dot_goal;
    recomputed += d.dot(task.p_theta_dot * d);
  }
  CHECK(reported == doctest::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("simulate with a zero-precision task keeps the torque constant") {
  const fs::path out = work_dir() / "sim_frozen";
  fs::remove_all(out);
  const RunResult res = run_cli(
      "--out " + out.string() +
      " simulate --tool-seed 32 --set task.p_theta_dot=0,0"
      " --set task.p_theta_ddot=0,0 --set task.p_u=0,0");
  CHECK(res.exit_code == 0);
  const auto lines = read_lines(out / "trajectory.csv");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = split_doubles(lines[i]);
    CHECK(v[5] == 0.1);
    CHECK(v[6] == 0.1);
  }
}

TEST_CASE("simulate surfaces integration failure as exit 2") {
  const fs::path out = work_dir() / "sim_fail";
  const RunResult res = run_cli("--out " + out.string() +
                                " simulate --tool-seed 33"
                                " --set sim.rtol=1e-300 --set sim.atol=1e-300");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("integration failed") != std::string::npos);
}

TEST_CASE("confidence prints pi_u without touching the integrator") {
  const fs::path out = work_dir() / "conf";
  fs::remove_all(out);
  const RunResult res = run_cli("--out " + out.string() +
                                " confidence --params 0.3,0.4,0.5,0.2");
  CHECK(res.exit_code == 0);

  confctl::ArmParamsd p;
  p.m1 = 0.3;
  p.m2 = 0.4;
  p.l1 = 0.5;
  p.l2 = 0.2;
  const auto conf = confctl::control_confidence(
      confctl::TaskKind::velocity, confctl::linearize(p),
      confctl::default_task(confctl::TaskKind::velocity));
  const auto lines = read_lines(out / "confidence.csv");
  REQUIRE(lines.size() == 2);
  const auto v = split_doubles(lines[1]);
  CHECK(v[9] == doctest::Approx(conf.logdet).epsilon(1e-15));
}

TEST_CASE("confidence reports a singular posterior with exit 0") {
  const fs::path out = work_dir() / "conf_singular";
  const RunResult res = run_cli(
      "--out " + out.string() +
      " confidence --params 0.3,0.4,0.5,0.2 --set task.kind=acceleration"
      " --set task.p_theta_ddot=0,0");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("singular") != std::string::npos);
}

TEST_CASE("select on toolset files") {
  const fs::path dir = work_dir();
  const fs::path single = dir / "single.csv";
  {
    std::ofstream o(single);
    o << "id,m1,m2,l1,l2\n0,0.4,0.4,0.4,0.4\n";
  }
  const fs::path dup = dir / "dup.csv";
  {
    std::ofstream o(dup);
    o << "id,m1,m2,l1,l2\n0,0.4,0.4,0.4,0.4\n1,0.4,0.4,0.4,0.4\n";
  }

  for (const std::string obj : {"free-energy", "quadratic", "confidence"}) {
    const RunResult res =
        run_cli("--out " + (dir / ("sel_" + obj)).string() +
                " select --toolset " + single.string() + " --objective " +
                obj);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("chosen_index: 0") != std::string::npos);
  }
  const RunResult res = run_cli("--out " + (dir / "sel_dup").string() +
                                " select --toolset " + dup.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("chosen_index: 0") != std::string::npos);

  CHECK(run_cli("select --toolset /missing.csv").exit_code == 1);

  // Two seeded tools: the CLI choice equals the library-level selection.
  const auto pool = confctl::sample_tools(2, 419);
  const fs::path pair = dir / "pair.csv";
  {
    std::ofstream o(pair);
    o.precision(17);
    o << "id,m1,m2,l1,l2\n";
    for (const auto& t : pool) {
      o << t.id << ',' << t.params.m1 << ',' << t.params.m2 << ','
        << t.params.l1 << ',' << t.params.l2 << '\n';
    }
  }
  std::vector<confctl::ArmParamsd> params{pool[0].params, pool[1].params};
  const auto rep = confctl::select_tool(
      params, confctl::default_task(confctl::TaskKind::velocity),
      confctl::Objective::free_energy, confctl::SimConfig{});
  const RunResult res2 = run_cli("--out " + (dir / "sel_pair").string() +
                                 " select --toolset " + pair.string() +
                                 " --objective free-energy");
  CHECK(res2.exit_code == 0);
  CHECK(res2.output.find("chosen_index: " +
                         std::to_string(rep.chosen_index)) !=
        std::string::npos);
}

TEST_CASE("experiment studies write row-complete, deterministic CSVs") {
  const fs::path a = work_dir() / "exp_a";
  const fs::path b = work_dir() / "exp_b";
  fs::remove_all(a);
  fs::remove_all(b);

  const std::string common =
      " --seed 77 --jobs 2 --set experiment.n_tools=20 experiment"
      " conf-vs-error";
  CHECK(run_cli("--out " + a.string() + common).exit_code == 0);
  CHECK(run_cli("--out " + b.string() + common).exit_code == 0);

  const auto rows = read_lines(a / "conf_vs_error.csv");
  CHECK(rows.size() == 1 + 20 * 3);  // header + tools x tasks
  CHECK(slurp(a / "conf_vs_error.csv") == slurp(b / "conf_vs_error.csv"));
  CHECK(slurp(a / "conf_vs_error_summary.csv") ==
        slurp(b / "conf_vs_error_summary.csv"));
  CHECK(fs::exists(a / "conf-vs-error_task1.svg"));
  CHECK(fs::exists(a / "conf-vs-error_task2.svg"));
  CHECK(fs::exists(a / "conf-vs-error_task3.svg"));
}

TEST_CASE("benchmark study is reproducible bit-exactly") {
  const fs::path a = work_dir() / "bench_a";
  const fs::path b = work_dir() / "bench_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string common =
      " --seed 78 --jobs 2 --set experiment.benchmark_trials=5"
      " --set experiment.benchmark_toolset=3 experiment benchmark";
  CHECK(run_cli("--out " + a.string() + common).exit_code == 0);
  CHECK(run_cli("--out " + b.string() + common).exit_code == 0);
  CHECK(slurp(a / "benchmark.csv") == slurp(b / "benchmark.csv"));
  CHECK(slurp(a / "benchmark_summary.csv") ==
        slurp(b / "benchmark_summary.csv"));
  const auto rows = read_lines(a / "benchmark.csv");
  CHECK(rows.size() == 1 + 5 * 3);  // header + trials x objectives
}

TEST_CASE("perturbation study respects a reduced sweep") {
  const fs::path out = work_dir() / "pert";
  fs::remove_all(out);
  const RunResult res = run_cli(
      "--out " + out.string() +
      " --seed 79 --jobs 2 --set experiment.n_perturbation_tools=4"
      " --set experiment.delta_t_sweep=-0.8,0.8 experiment perturbation");
  CHECK(res.exit_code == 0);
  const auto rows = read_lines(out / "perturbation.csv");
  CHECK(rows.size() == 1 + 4 * 2 * 2);  // header + tools x levels x tasks
  CHECK(fs::exists(out / "perturbation_summary.csv"));
  CHECK(fs::exists(out / "perturbation_task1.svg"));
  CHECK(fs::exists(out / "perturbation_task2.svg"));

  // Rows at the primary level match a library recomputation of the same
  // seeded tools.
  const auto tools = confctl::sample_tools(4, 79);
  const auto t2 = confctl::default_task(confctl::TaskKind::velocity);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto v = split_doubles(rows[i]);
    const int task_no = static_cast<int>(v[1]);
    const int tool_id = static_cast<int>(v[3]);
    const double level = v[7];
    if (task_no != 2 || level != -0.8) continue;
    const auto outcome = confctl::perturbation_sensitivity(
        tools[tool_id], t2, confctl::Vec2d(level, level),
        confctl::SimConfig{});
    REQUIRE(outcome.ok());
    CHECK(v[5] == outcome.unperturbed_error);
    CHECK(v[6] == outcome.perturbed_error);
  }
}

TEST_CASE("selection grid emits the full matrix") {
  const fs::path out = work_dir() / "grid";
  fs::remove_all(out);
  const RunResult res = run_cli(
      "--out " + out.string() +
      " --seed 80 --jobs 2 --set experiment.grid_trials=4"
      " --set experiment.grid_toolset=3 experiment selection-grid");
  CHECK(res.exit_code == 0);
  const auto rows = read_lines(out / "selection_grid.csv");
  CHECK(rows.size() == 1 + 4 * 3);
  // Each trial selects exactly one tool per objective.
  int f_marks = 0, j_marks = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    f_marks += cells[7] == "1";
    j_marks += cells[8] == "1";
  }
  CHECK(f_marks == 4);
  CHECK(j_marks == 4);
}
