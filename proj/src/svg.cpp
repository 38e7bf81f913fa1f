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

#include "confctl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace confctl::svg {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_scatter(const std::filesystem::path& path,
                   const std::vector<std::pair<double, double>>& points,
                   const std::string& title, const std::string& x_label,
                   const std::string& y_label) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  if (!points.empty()) {
    x_min = y_min = std::numeric_limits<double>::infinity();
    x_max = y_max = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
    if (x_min == x_max) { x_min -= 0.5; x_max += 0.5; }
    if (y_min == y_max) { y_min -= 0.5; y_max += 0.5; }
  }
  const double px = (kWidth - kLeft - kRight) / (x_max - x_min);
  const double py = (kHeight - kTop - kBottom) / (y_max - y_min);
  auto sx = [&](double x) { return kLeft + (x - x_min) * px; };
  auto sy = [&](double y) { return kHeight - kBottom - (y - y_min) * py; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom
      << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_min + (y_max - y_min) * i / 4.0;
    out << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << fmt(xv) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(sy(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\">" << y_label << "</text>\n";

  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    out << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
        << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace confctl::svg
