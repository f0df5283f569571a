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
#include "organdet/roi_pool.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace organdet {
namespace {

struct CellRange {
  int begin;
  int end;  // exclusive
};

CellRange BinCells(double start, double end, int limit) {
  int lo = static_cast<int>(std::floor(start));
  int hi = static_cast<int>(std::ceil(end));
  lo = std::clamp(lo, 0, limit - 1);
  hi = std::clamp(hi, lo + 1, limit);
  return CellRange{lo, hi};
}

}  // namespace

FeatureGrid::FeatureGrid(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ <= 0 || cols_ <= 0) {
    throw std::invalid_argument("feature grid: dimensions must be positive");
  }
  if (values_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw std::invalid_argument("feature grid: value count mismatch");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("feature grid: values must be finite");
    }
  }
}

FeatureGrid::FeatureGrid(int rows, int cols, double fill)
    : FeatureGrid(rows, cols,
                  std::vector<double>(
                      static_cast<std::size_t>(std::max(rows, 0)) *
                          static_cast<std::size_t>(std::max(cols, 0)),
                      fill)) {}

FeatureGrid RoiMaxPool(const FeatureGrid& grid, const BoundingBox& roi,
                       int size) {
  if (size < 1) throw std::invalid_argument("roi pool: size must be >= 1");
  if (!roi.valid()) throw std::invalid_argument("roi pool: invalid roi");
  if (roi.x_max < 0 || roi.y_max < 0 || roi.x_min >= grid.cols() ||
      roi.y_min >= grid.rows()) {
    throw std::invalid_argument("roi pool: roi lies outside the grid");
  }
  const BoundingBox clipped = Clip(roi, grid.cols(), grid.rows());
  // Edge b sits at min + extent * b / size, so the last edge is exact.
  auto edge = [size](double lo, double extent, int b) {
    return lo + extent * b / size;
  };

  std::vector<double> out(static_cast<std::size_t>(size) * size);
  for (int by = 0; by < size; ++by) {
    const CellRange rows =
        BinCells(edge(clipped.y_min, clipped.height(), by),
                 edge(clipped.y_min, clipped.height(), by + 1), grid.rows());
    for (int bx = 0; bx < size; ++bx) {
      const CellRange cols =
          BinCells(edge(clipped.x_min, clipped.width(), bx),
                   edge(clipped.x_min, clipped.width(), bx + 1), grid.cols());
      double best = -std::numeric_limits<double>::infinity();
      for (int r = rows.begin; r < rows.end; ++r) {
        for (int c = cols.begin; c < cols.end; ++c) {
          best = std::max(best, grid.at(r, c));
        }
      }
      out[static_cast<std::size_t>(by) * size + bx] = best;
    }
  }
  return FeatureGrid(size, size, std::move(out));
}

}  // namespace organdet
