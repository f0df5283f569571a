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
#ifndef ORGANDET_ANCHORS_H_
#define ORGANDET_ANCHORS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "organdet/geometry.h"

namespace organdet {

// Anchor tiling over a feature pyramid. Level i uses scales[i] (square root
// of the anchor area, in pixels) at strides[i] pixels per cell, and emits one
// anchor per ratio at every cell. Ratios are width / height, so 0.5 is tall
// and 2.0 is wide.
struct AnchorConfig {
  std::vector<double> scales = {32, 64, 128, 256, 512, 1024};
  std::vector<double> ratios = {0.5, 1.0, 2.0};
  std::vector<int> strides = {4, 8, 16, 32, 64, 128};
  double center_offset = 0.5;

  // Throws std::invalid_argument describing the first violated constraint.
  void Validate() const;
};

struct AnchorShape {
  double width = 0.0;
  double height = 0.0;
};

// width = scale * sqrt(ratio), height = scale / sqrt(ratio).
AnchorShape ComputeAnchorShape(double scale, double ratio);

struct GridSize {
  int height = 0;
  int width = 0;
};

struct Anchor {
  BoundingBox box;
  int level = 0;
};

// Level-major, then row-major over cells, then ratio order. Cell (i, j) on
// level L is centred at ((j + offset) * stride, (i + offset) * stride).
// Throws std::invalid_argument on an invalid config or when grid_sizes does
// not hold exactly one entry per level.
std::vector<Anchor> GenerateAnchors(const AnchorConfig& config,
                                    std::span<const GridSize> grid_sizes);

// Number of anchors GenerateAnchors would return.
std::size_t CountAnchors(const AnchorConfig& config,
                         std::span<const GridSize> grid_sizes);

// Grid sizes for an image: ceil(image_dim / stride) cells on every level.
std::vector<GridSize> GridSizesForImage(const AnchorConfig& config,
                                        int image_width, int image_height);

struct ProposalConfig {
  double nms_threshold = 0.25;
  std::size_t top_n = 1000;
  double fg_iou = 0.7;
  double bg_iou = 0.3;

  static ProposalConfig Training();
  static ProposalConfig Testing();

  void Validate() const;
};

enum class AnchorKind { kForeground, kBackground, kIgnore };

struct AnchorLabel {
  AnchorKind kind = AnchorKind::kBackground;
  // Present iff kind is kForeground.
  std::optional<std::size_t> matched_gt;

  friend bool operator==(const AnchorLabel&, const AnchorLabel&) = default;
};

// Foreground when the best IoU over ground truth reaches fg_iou, background
// below bg_iou, ignored in between. Each ground-truth box additionally
// promotes its highest-IoU anchor (when that IoU is positive) to foreground.
// A foreground anchor is matched to its own argmax ground truth. All ties go
// to the lowest index.
std::vector<AnchorLabel> LabelAnchors(std::span<const BoundingBox> anchors,
                                      std::span<const BoundingBox> gts,
                                      const ProposalConfig& config);
std::vector<AnchorLabel> LabelAnchors(std::span<const Anchor> anchors,
                                      std::span<const BoundingBox> gts,
                                      const ProposalConfig& config);

}  // namespace organdet

#endif  // ORGANDET_ANCHORS_H_
