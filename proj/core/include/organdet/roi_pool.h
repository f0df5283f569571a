// Copyright 2026 The organdet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ORGANDET_ROI_POOL_H_
#define ORGANDET_ROI_POOL_H_

#include <cstddef>
#include <vector>

#include "organdet/geometry.h"

namespace organdet {

// Dense row-major matrix of finite reals. Cell (row, col) covers
// [col, col + 1) x [row, row + 1) in grid coordinates.
class FeatureGrid {
 public:
  // Throws std::invalid_argument unless rows, cols > 0, values has
  // rows * cols entries, and every value is finite.
  FeatureGrid(int rows, int cols, std::vector<double> values);
  FeatureGrid(int rows, int cols, double fill);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * cols_ + col];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> values_;
};

// Max-pools `roi` (grid coordinates) into a size x size grid. The RoI is
// clipped to the grid and split into equal real-valued bins; bin
// [start, end) covers cells floor(start) .. ceil(end) - 1, widened to one
// cell when empty.
//
// Throws std::invalid_argument when size < 1, the RoI is invalid, or it
// lies entirely outside the grid.
FeatureGrid RoiMaxPool(const FeatureGrid& grid, const BoundingBox& roi,
                       int size);

}  // namespace organdet

#endif  // ORGANDET_ROI_POOL_H_
