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
#include "organdet/geometry.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace organdet {
namespace {

// Absorbs representation error in source * (target / source) so that the
// limiting axis lands exactly on the target size.
constexpr double kFloorSlack = 1e-9;

int ScaledDim(int source, double scale, int target) {
  const double scaled = static_cast<double>(source) * scale;
  const int floored = static_cast<int>(std::floor(scaled + kFloorSlack));
  return std::clamp(floored, 0, target);
}

}  // namespace

bool BoundingBox::valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) &&
         std::isfinite(x_max) && std::isfinite(y_max) && x_max >= x_min &&
         y_max >= y_min;
}

double Area(const BoundingBox& box) {
  return std::max(0.0, box.width()) * std::max(0.0, box.height());
}

double IntersectionOverUnion(const BoundingBox& a, const BoundingBox& b) {
  const double iw =
      std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih =
      std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  const double intersection =
      (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double union_area = Area(a) + Area(b) - intersection;
  if (union_area <= 0.0) return 0.0;
  return std::clamp(intersection / union_area, 0.0, 1.0);
}

BoundingBox Clip(const BoundingBox& box, double width, double height) {
  return BoundingBox{std::clamp(box.x_min, 0.0, width),
                     std::clamp(box.y_min, 0.0, height),
                     std::clamp(box.x_max, 0.0, width),
                     std::clamp(box.y_max, 0.0, height)};
}

int ScaleTransform::output_width() const {
  return ScaledDim(source_width, scale, target_width);
}

int ScaleTransform::output_height() const {
  return ScaledDim(source_height, scale, target_height);
}

ScaleTransform FitRescale(int source_width, int source_height,
                          int target_width, int target_height) {
  if (source_width <= 0 || source_height <= 0 || target_width <= 0 ||
      target_height <= 0) {
    throw std::invalid_argument("FitRescale: dimensions must be positive");
  }
  const double sx = static_cast<double>(target_width) / source_width;
  const double sy = static_cast<double>(target_height) / source_height;
  return ScaleTransform{std::min(sx, sy), source_width, source_height,
                        target_width, target_height};
}

BoundingBox TransformBox(const BoundingBox& box, const ScaleTransform& t) {
  return ScaleBox(box, t.scale);
}

BoundingBox ScaleBox(const BoundingBox& box, double scale) {
  return BoundingBox{box.x_min * scale, box.y_min * scale, box.x_max * scale,
                     box.y_max * scale};
}

}  // namespace organdet
