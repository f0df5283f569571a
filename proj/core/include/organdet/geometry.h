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
#ifndef ORGANDET_GEOMETRY_H_
#define ORGANDET_GEOMETRY_H_

namespace organdet {

// Axis-aligned box in continuous pixel coordinates, origin top-left.
// Width is x_max - x_min; there is no "+1" pixel convention.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  // Finite coordinates with x_max >= x_min and y_max >= y_min.
  bool valid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

double Area(const BoundingBox& box);

// Intersection over union. Zero when the union is empty, so degenerate
// boxes have IoU 0 with everything, themselves included.
double IntersectionOverUnion(const BoundingBox& a, const BoundingBox& b);

// Clamps coordinates to [0, width] x [0, height].
BoundingBox Clip(const BoundingBox& box, double width, double height);

// Uniform aspect-preserving fit of a source canvas into a target canvas.
struct ScaleTransform {
  double scale = 1.0;
  int source_width = 0;
  int source_height = 0;
  int target_width = 0;
  int target_height = 0;

  // floor(source * scale), never larger than the target.
  int output_width() const;
  int output_height() const;
};

// scale = min(target_width / source_width, target_height / source_height).
// Throws std::invalid_argument unless all dimensions are positive.
ScaleTransform FitRescale(int source_width, int source_height,
                          int target_width, int target_height);

BoundingBox TransformBox(const BoundingBox& box, const ScaleTransform& t);
BoundingBox ScaleBox(const BoundingBox& box, double scale);

}  // namespace organdet

#endif  // ORGANDET_GEOMETRY_H_
