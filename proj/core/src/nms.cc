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
#include "organdet/nms.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace organdet {

std::vector<std::size_t> RankByScore(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

std::vector<std::size_t> NonMaxSuppression(
    std::span<const BoundingBox> boxes, std::span<const double> scores,
    double threshold, std::optional<std::span<const int>> categories) {
  if (boxes.size() != scores.size()) {
    throw std::invalid_argument("nms: boxes and scores differ in length");
  }
  if (categories && categories->size() != boxes.size()) {
    throw std::invalid_argument("nms: boxes and categories differ in length");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("nms: threshold must lie in [0, 1]");
  }

  const std::vector<std::size_t> order = RankByScore(scores);

  // Kept boxes are bucketed by category so each candidate is only compared
  // against boxes that can suppress it.
  std::unordered_map<int, std::vector<std::size_t>> kept_by_category;
  std::vector<std::size_t> keep;
  for (std::size_t idx : order) {
    const int category = categories ? (*categories)[idx] : 0;
    std::vector<std::size_t>& bucket = kept_by_category[category];
    const bool suppressed =
        std::any_of(bucket.begin(), bucket.end(), [&](std::size_t k) {
          return IntersectionOverUnion(boxes[k], boxes[idx]) > threshold;
        });
    if (suppressed) continue;
    bucket.push_back(idx);
    keep.push_back(idx);
  }
  return keep;
}

std::vector<Proposal> SelectProposals(std::span<const BoundingBox> boxes,
                                      std::span<const double> scores,
                                      const ProposalConfig& config) {
  config.Validate();
  std::vector<std::size_t> keep =
      NonMaxSuppression(boxes, scores, config.nms_threshold);
  if (keep.size() > config.top_n) keep.resize(config.top_n);
  std::vector<Proposal> proposals;
  proposals.reserve(keep.size());
  for (std::size_t idx : keep) {
    proposals.push_back(Proposal{boxes[idx], scores[idx], idx});
  }
  return proposals;
}

}  // namespace organdet
