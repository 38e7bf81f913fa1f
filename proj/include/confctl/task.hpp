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

#ifndef CONFCTL_TASK_HPP_
#define CONFCTL_TASK_HPP_

#include <stdexcept>
#include <string>

#include "confctl/types.hpp"

namespace confctl {

/// The three task families: hold a joint configuration, a joint velocity,
/// or a joint acceleration.
enum class TaskKind { position, velocity, acceleration };

inline const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::position: return "position";
    case TaskKind::velocity: return "velocity";
    case TaskKind::acceleration: return "acceleration";
  }
  return "?";
}

inline TaskKind task_kind_from_string(const std::string& s) {
  if (s == "position" || s == "1") return TaskKind::position;
  if (s == "velocity" || s == "2") return TaskKind::velocity;
  if (s == "acceleration" || s == "3") return TaskKind::acceleration;
  throw std::invalid_argument("unknown task kind: " + s);
}

/// 1-based index used in file names and CSV columns.
inline int task_number(TaskKind k) { return static_cast<int>(k) + 1; }

/// Goals and prior precisions of one task. Precisions of quantities a task
/// does not care about are zero; all must be symmetric PSD.
struct TaskSpec {
  TaskKind kind = TaskKind::position;
  Vec2d theta_goal = Vec2d::Zero();
  Vec2d theta_dot_goal = Vec2d::Zero();
  Vec2d theta_ddot_goal = Vec2d::Zero();
  Vec2d eta_u = Vec2d::Zero();
  Mat2d p_theta = Mat2d::Zero();
  Mat2d p_theta_dot = Mat2d::Zero();
  Mat2d p_theta_ddot = Mat2d::Zero();
  Mat2d p_u = Mat2d::Zero();
};

/// Reference task settings: position task reaches [pi/3, pi/6] with
/// precisions (100, 50, 1, 1); velocity task holds [0, 2] rad/s with
/// (50, 1, 1); acceleration task holds [0, 0.1] rad/s^2 with precision 10
/// and no control prior.
inline TaskSpec default_task(TaskKind kind) {
  TaskSpec t;
  t.kind = kind;
  switch (kind) {
    case TaskKind::position:
      t.theta_goal << std::numbers::pi / 3.0, std::numbers::pi / 6.0;
      t.p_theta = 100.0 * Mat2d::Identity();
      t.p_theta_dot = 50.0 * Mat2d::Identity();
      t.p_theta_ddot = Mat2d::Identity();
      t.p_u = Mat2d::Identity();
      break;
    case TaskKind::velocity:
      t.theta_dot_goal << 0.0, 2.0;
      t.p_theta_dot = 50.0 * Mat2d::Identity();
      t.p_theta_ddot = Mat2d::Identity();
      t.p_u = Mat2d::Identity();
      break;
    case TaskKind::acceleration:
      t.theta_ddot_goal << 0.0, 0.1;
      t.p_theta_ddot = 10.0 * Mat2d::Identity();
      break;
  }
  return t;
}

}  // namespace confctl

#endif  // CONFCTL_TASK_HPP_
