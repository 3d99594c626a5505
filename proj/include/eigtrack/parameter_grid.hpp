// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <vector>

namespace eigtrack {

/// `count` equispaced values from lo to hi. The end points are exact and
/// interior values are convex combinations, so symmetric grids contain
/// exact zeros.
inline std::vector<double> uniform_grid(double lo, double hi, int count) {
  if (count < 2 || !(lo < hi)) {
    throw std::invalid_argument("uniform_grid: need count >= 2 and lo < hi");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  const int last = count - 1;
  for (int j = 0; j <= last; ++j) {
    if (j == 0) {
      grid.push_back(lo);
    } else if (j == last) {
      grid.push_back(hi);
    } else {
      grid.push_back((lo * (last - j) + hi * j) / last);
    }
  }
  return grid;
}

/// Delta mu = 0.1 on [-0.9, 0.9], 19 points.
inline std::vector<double> default_parameter_grid() { return uniform_grid(-0.9, 0.9, 19); }

}  // namespace eigtrack
