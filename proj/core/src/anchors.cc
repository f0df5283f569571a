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
#include "organdet/anchors.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace organdet {
namespace {

void Require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

void AnchorConfig::Validate() const {
  Require(!scales.empty(), "anchor config: scales must be non-empty");
  Require(!ratios.empty(), "anchor config: ratios must be non-empty");
  Require(strides.size() == scales.size(),
          "anchor config: need exactly one stride per scale (got " +
              std::to_string(strides.size()) + " strides, " +
              std::to_string(scales.size()) + " scales)");
  for (double s : scales) {
    Require(std::isfinite(s) && s > 0, "anchor config: scales must be > 0");
  }
  for (double r : ratios) {
    Require(std::isfinite(r) && r > 0, "anchor config: ratios must be > 0");
  }
  for (std::size_t i = 0; i < strides.size(); ++i) {
    Require(strides[i] > 0, "anchor config: strides must be > 0");
    Require(i == 0 || strides[i] > strides[i - 1],
            "anchor config: strides must be strictly increasing");
  }
  Require(center_offset >= 0.0 && center_offset <= 1.0,
          "anchor config: center_offset must lie in [0, 1]");
}

AnchorShape ComputeAnchorShape(double scale, double ratio) {
  if (!(scale > 0) || !(ratio > 0)) {
    throw std::invalid_argument("anchor shape: scale and ratio must be > 0");
  }
  const double root = std::sqrt(ratio);
  return AnchorShape{scale * root, scale / root};
}

std::size_t CountAnchors(const AnchorConfig& config,
                         std::span<const GridSize> grid_sizes) {
  config.Validate();
  Require(grid_sizes.size() == config.strides.size(),
          "anchors: expected " + std::to_string(config.strides.size()) +
              " grid sizes, got " + std::to_string(grid_sizes.size()));
  std::size_t cells = 0;
  for (const GridSize& g : grid_sizes) {
    Require(g.height >= 0 && g.width >= 0,
            "anchors: grid dimensions must be non-negative");
    cells += static_cast<std::size_t>(g.height) *
             static_cast<std::size_t>(g.width);
  }
  return cells * config.ratios.size();
}

std::vector<Anchor> GenerateAnchors(const AnchorConfig& config,
                                    std::span<const GridSize> grid_sizes) {
  std::vector<Anchor> anchors;
  anchors.reserve(CountAnchors(config, grid_sizes));

  std::vector<AnchorShape> shapes(config.ratios.size());
  for (std::size_t level = 0; level < grid_sizes.size(); ++level) {
    for (std::size_t r = 0; r < config.ratios.size(); ++r) {
      shapes[r] = ComputeAnchorShape(config.scales[level], config.ratios[r]);
    }
    const double stride = config.strides[level];
    const GridSize grid = grid_sizes[level];
    for (int i = 0; i < grid.height; ++i) {
      const double cy = (i + config.center_offset) * stride;
      for (int j = 0; j < grid.width; ++j) {
        const double cx = (j + config.center_offset) * stride;
        for (const AnchorShape& shape : shapes) {
          const double hw = 0.5 * shape.width;
          const double hh = 0.5 * shape.height;
          anchors.push_back(
              Anchor{BoundingBox{cx - hw, cy - hh, cx + hw, cy + hh},
                     static_cast<int>(level)});
        }
      }
    }
  }
  return anchors;
}

std::vector<GridSize> GridSizesForImage(const AnchorConfig& config,
                                        int image_width, int image_height) {
  config.Validate();
  Require(image_width > 0 && image_height > 0,
          "anchors: image dimensions must be positive");
  std::vector<GridSize> sizes;
  sizes.reserve(config.strides.size());
  for (int stride : config.strides) {
    sizes.push_back(GridSize{(image_height + stride - 1) / stride,
                             (image_width + stride - 1) / stride});
  }
  return sizes;
}

ProposalConfig ProposalConfig::Training() {
  ProposalConfig config;
  config.nms_threshold = 0.6;
  return config;
}

ProposalConfig ProposalConfig::Testing() {
  ProposalConfig config;
  config.nms_threshold = 0.25;
  return config;
}

void ProposalConfig::Validate() const {
  Require(nms_threshold >= 0.0 && nms_threshold <= 1.0,
          "proposal config: nms_threshold must lie in [0, 1]");
  Require(fg_iou >= 0.0 && fg_iou <= 1.0,
          "proposal config: fg_iou must lie in [0, 1]");
  Require(bg_iou >= 0.0 && bg_iou <= 1.0,
          "proposal config: bg_iou must lie in [0, 1]");
  Require(bg_iou <= fg_iou, "proposal config: bg_iou must not exceed fg_iou");
  Require(top_n > 0, "proposal config: top_n must be positive");
}

std::vector<AnchorLabel> LabelAnchors(std::span<const BoundingBox> anchors,
                                      std::span<const BoundingBox> gts,
                                      const ProposalConfig& config) {
  config.Validate();
  std::vector<AnchorLabel> labels(anchors.size());
  if (gts.empty()) return labels;

  std::vector<double> best_iou(anchors.size(), -1.0);
  std::vector<std::size_t> best_gt(anchors.size(), 0);
  std::vector<double> gt_best_iou(gts.size(), 0.0);
  std::vector<std::optional<std::size_t>> gt_best_anchor(gts.size());

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = IntersectionOverUnion(anchors[a], gts[g]);
      if (iou > best_iou[a]) {
        best_iou[a] = iou;
        best_gt[a] = g;
      }
      if (iou > gt_best_iou[g]) {
        gt_best_iou[g] = iou;
        gt_best_anchor[g] = a;
      }
    }
  }

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    if (best_iou[a] >= config.fg_iou) {
      labels[a] = AnchorLabel{AnchorKind::kForeground, best_gt[a]};
    } else if (best_iou[a] < config.bg_iou) {
      labels[a] = AnchorLabel{AnchorKind::kBackground, std::nullopt};
    } else {
      labels[a] = AnchorLabel{AnchorKind::kIgnore, std::nullopt};
    }
  }
  for (const auto& anchor : gt_best_anchor) {
    if (!anchor) continue;
    labels[*anchor] = AnchorLabel{AnchorKind::kForeground, best_gt[*anchor]};
  }
  return labels;
}

std::vector<AnchorLabel> LabelAnchors(std::span<const Anchor> anchors,
                                      std::span<const BoundingBox> gts,
                                      const ProposalConfig& config) {
  std::vector<BoundingBox> boxes;
  boxes.reserve(anchors.size());
  for (const Anchor& a : anchors) boxes.push_back(a.box);
  return LabelAnchors(boxes, gts, config);
}

}  // namespace organdet
