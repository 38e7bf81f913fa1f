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

#ifndef CONFCTL_TYPES_HPP_
#define CONFCTL_TYPES_HPP_

#include <Eigen/Dense>

#include <numbers>

namespace confctl {

template <typename Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar> using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar> using Mat42 = Eigen::Matrix<Scalar, 4, 2>;

using Vec2d = Vec2<double>;
using Vec4d = Vec4<double>;
using Vec6d = Vec6<double>;
using Mat2d = Mat2<double>;
using Mat4d = Mat4<double>;
using Mat42d = Mat42<double>;

template <typename Scalar>
inline constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);

}  // namespace confctl

#endif  // CONFCTL_TYPES_HPP_
