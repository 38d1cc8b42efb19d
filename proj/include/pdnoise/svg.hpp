// Copyright 2026 The pdnoise Authors.
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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pdnoise/transient.hpp"

namespace pdnoise::svg {

/// m x n heatmap, tile (x, y) drawn at column x, row y from the top.
/// Colors map [lo, hi] linearly onto a blue-to-red ramp.
std::string heatmap(const NoiseMap& map, const std::string& title, double lo, double hi,
                    const std::string& unit = "V");

std::string histogram(std::span<const double> values, std::size_t bins, const std::string& title,
                      const std::string& x_label);

struct Series {
  std::string name;
  std::vector<double> x, y;
};

std::string line_plot(std::span<const Series> series, const std::string& title, const std::string& x_label,
                      const std::string& y_label);

}  // namespace pdnoise::svg
