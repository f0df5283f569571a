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
#ifndef ORGANDET_EVAL_H_
#define ORGANDET_EVAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "organdet/dataset.h"
#include "organdet/geometry.h"

namespace organdet {

struct Detection {
  std::string image_id;
  BoundingBox box;
  int category_id = 0;
  double score = 0.0;
};

struct GroundTruthBox {
  std::string image_id;
  BoundingBox box;
  int category_id = 0;
};

struct RankedDetection {
  std::size_t detection_index = 0;  // position in the input list
  double score = 0.0;
  bool true_positive = false;
  std::optional<std::size_t> matched_gt;  // position in the input list

  friend bool operator==(const RankedDetection&,
                         const RankedDetection&) = default;
};

struct MatchResult {
  std::vector<RankedDetection> ranked;  // descending score, stable
  std::size_t gt_count = 0;

  std::size_t true_positives() const;
};

// Greedy matching for one category across all images. Detections are taken
// by descending score (ties keep input order); each claims the unmatched
// ground-truth box in its own image with the highest IoU (ties to the lowest
// index) when that IoU is at least `iou_threshold`, and is a false positive
// otherwise. Throws std::invalid_argument unless 0 < iou_threshold <= 1.
MatchResult MatchDetections(std::span<const Detection> detections,
                            std::span<const GroundTruthBox> gts,
                            double iou_threshold, int category_id);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;

  friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

// One point per rank. Empty when there is no ground truth.
struct PrCurve {
  std::vector<PrPoint> points;
  std::size_t gt_count = 0;
};

PrCurve ComputePrCurve(const MatchResult& match);

// All-points interpolated area under the curve on a 0-1 scale (VOC 2012).
// nullopt when the curve has no ground truth.
std::optional<double> AveragePrecisionVoc(const PrCurve& curve);

// 101-point interpolated precision (recall 0.00, 0.01, ..., 1.00) on a
// 0-100 scale. nullopt when the curve has no ground truth.
std::optional<double> AveragePrecision101(const PrCurve& curve);

// 0.50, 0.55, ..., 0.95.
std::vector<double> CocoIouThresholds();

// Mean of AveragePrecision101 over `iou_thresholds` for one category, on a
// 0-100 scale. nullopt when the category has no ground truth. Throws
// std::invalid_argument for an empty threshold list.
std::optional<double> AveragePrecisionCoco(
    std::span<const Detection> detections, std::span<const GroundTruthBox> gts,
    int category_id, std::span<const double> iou_thresholds);

struct CategoryResult {
  std::string name;
  std::size_t gt_count = 0;
  // Unset for categories without ground truth.
  std::optional<double> ap50_voc;  // 0-1
  std::optional<double> ap50;      // 0-100
  std::optional<double> ap75;      // 0-100
  std::optional<double> ap;        // 0-100, mean over CocoIouThresholds()

  friend bool operator==(const CategoryResult&,
                         const CategoryResult&) = default;
};

// Headline metrics average over categories that have ground truth.
struct EvalReport {
  double score_threshold = 0.5;
  double ap50_voc = 0.0;   // 0-1
  double ap50_coco = 0.0;  // 0-100
  double ap75 = 0.0;       // 0-100
  double ap = 0.0;         // 0-100
  // Cross-category AP at each of CocoIouThresholds().
  std::vector<double> ap_by_threshold;
  std::vector<CategoryResult> per_category;  // vocabulary order

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Drops detections scoring below `score_threshold`, then evaluates every
// vocabulary category. Throws std::invalid_argument for detections with
// scores outside [0, 1] or categories outside the vocabulary.
EvalReport Evaluate(std::span<const Detection> detections,
                    std::span<const GroundTruthBox> gts,
                    const CategoryVocabulary& vocabulary,
                    double score_threshold = 0.5);

// All boxes of a manifest as ground truth.
std::vector<GroundTruthBox> GroundTruthFromManifest(
    const DatasetManifest& manifest);

// Boxes of `predictions` as detections, with categories re-mapped by name
// into `vocabulary`. Boxes without a score count as score 1. Throws
// std::invalid_argument when a prediction category is not in `vocabulary`.
std::vector<Detection> DetectionsFromManifest(
    const DatasetManifest& predictions, const CategoryVocabulary& vocabulary);

}  // namespace organdet

#endif  // ORGANDET_EVAL_H_
