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

#ifndef CONFCTL_CSV_HPP_
#define CONFCTL_CSV_HPP_

#include <cstdio>
#include <optional>
#include <string>

namespace confctl::csv {

/// Floating-point cell with 17 significant digits (round-trips a double).
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string num(std::optional<double> v) {
  return v ? num(*v) : std::string{};
}

}  // namespace confctl::csv

#endif  // CONFCTL_CSV_HPP_
