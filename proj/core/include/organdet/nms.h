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
#ifndef ORGANDET_NMS_H_
#define ORGANDET_NMS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "organdet/anchors.h"
#include "organdet/geometry.h"

namespace organdet {

// Greedy non-maximum suppression. Boxes are visited by descending score,
// ties broken by ascending index. A visited box is kept unless it overlaps
// an already-kept box with IoU strictly greater than `threshold`. When
// `categories` is given, only boxes of the same category suppress each
// other. Returns kept indices in keep order.
//
// Throws std::invalid_argument on length mismatch or a threshold outside
// [0, 1].
std::vector<std::size_t> NonMaxSuppression(
    std::span<const BoundingBox> boxes, std::span<const double> scores,
    double threshold,
    std::optional<std::span<const int>> categories = std::nullopt);

struct Proposal {
  BoundingBox box;
  double score = 0.0;
  std::size_t index = 0;  // position in the input
};

// Class-agnostic NMS at config.nms_threshold, truncated to config.top_n.
std::vector<Proposal> SelectProposals(std::span<const BoundingBox> boxes,
                                      std::span<const double> scores,
                                      const ProposalConfig& config);

// Indices ordered by descending score, ties by ascending index.
std::vector<std::size_t> RankByScore(std::span<const double> scores);

}  // namespace organdet

#endif  // ORGANDET_NMS_H_
