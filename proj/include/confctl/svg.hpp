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

#ifndef CONFCTL_SVG_HPP_
#define CONFCTL_SVG_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace confctl::svg {

/// Minimal scatter plot, presentation only; nothing downstream parses it.
void write_scatter(const std::filesystem::path& path,
                   const std::vector<std::pair<double, double>>& points,
                   const std::string& title, const std::string& x_label,
                   const std::string& y_label);

}  // namespace confctl::svg

#endif  // CONFCTL_SVG_HPP_
