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
#include "organdet/eval.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "organdet/nms.h"

namespace organdet {
namespace {

constexpr int kRecallSamples = 101;

// Arithmetic mean, clamped to [min, max] of the terms.
double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return std::clamp(mean, *lo, *hi);
}

}  // namespace

std::size_t MatchResult::true_positives() const {
  return static_cast<std::size_t>(
      std::count_if(ranked.begin(), ranked.end(),
                    [](const RankedDetection& d) { return d.true_positive; }));
}

MatchResult MatchDetections(std::span<const Detection> detections,
                            std::span<const GroundTruthBox> gts,
                            double iou_threshold, int category_id) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw std::invalid_argument("match: IoU threshold must lie in (0, 1]");
  }
  MatchResult result;
  std::unordered_map<std::string_view, std::vector<std::size_t>> gts_by_image;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (gts[g].category_id != category_id) continue;
    gts_by_image[gts[g].image_id].push_back(g);
    ++result.gt_count;
  }

  std::vector<std::size_t> candidates;
  std::vector<double> scores;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (detections[d].category_id != category_id) continue;
    candidates.push_back(d);
    scores.push_back(detections[d].score);
  }

  std::vector<bool> claimed(gts.size(), false);
  result.ranked.reserve(candidates.size());
  for (std::size_t rank : RankByScore(scores)) {
    const Detection& det = detections[candidates[rank]];
    RankedDetection ranked{candidates[rank], det.score, false, std::nullopt};
    auto it = gts_by_image.find(det.image_id);
    if (it != gts_by_image.end()) {
      double best_iou = -1.0;
      std::optional<std::size_t> best;
      for (std::size_t g : it->second) {
        if (claimed[g]) continue;
        const double iou = IntersectionOverUnion(det.box, gts[g].box);
        if (iou > best_iou) {
          best_iou = iou;
          best = g;
        }
      }
      if (best && best_iou >= iou_threshold) {
        claimed[*best] = true;
        ranked.true_positive = true;
        ranked.matched_gt = best;
      }
    }
    result.ranked.push_back(ranked);
  }
  return result;
}

PrCurve ComputePrCurve(const MatchResult& match) {
  PrCurve curve;
  curve.gt_count = match.gt_count;
  if (match.gt_count == 0) return curve;
  curve.points.reserve(match.ranked.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < match.ranked.size(); ++k) {
    if (match.ranked[k].true_positive) ++tp;
    curve.points.push_back(
        PrPoint{static_cast<double>(tp) / match.gt_count,
                static_cast<double>(tp) / static_cast<double>(k + 1)});
  }
  return curve;
}

std::optional<double> AveragePrecisionVoc(const PrCurve& curve) {
  if (curve.gt_count == 0) return std::nullopt;
  // Sentinels at recall 0 and 1 as in the VOC devkit.
  std::vector<double> recall = {0.0};
  std::vector<double> precision = {0.0};
  for (const PrPoint& p : curve.points) {
    recall.push_back(p.recall);
    precision.push_back(p.precision);
  }
  recall.push_back(1.0);
  precision.push_back(0.0);
  for (std::size_t i = precision.size() - 1; i > 0; --i) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  for (std::size_t i = 1; i < recall.size(); ++i) {
    if (recall[i] != recall[i - 1]) {
      ap += (recall[i] - recall[i - 1]) * precision[i];
    }
  }
  return ap;
}

std::optional<double> AveragePrecision101(const PrCurve& curve) {
  if (curve.gt_count == 0) return std::nullopt;
  std::vector<double> envelope(curve.points.size());
  double running = 0.0;
  for (std::size_t i = curve.points.size(); i-- > 0;) {
    running = std::max(running, curve.points[i].precision);
    envelope[i] = running;
  }
  double sum = 0.0;
  std::size_t k = 0;
  for (int i = 0; i < kRecallSamples; ++i) {
    const double r = static_cast<double>(i) / (kRecallSamples - 1);
    while (k < curve.points.size() && curve.points[k].recall < r) ++k;
    if (k == curve.points.size()) break;
    sum += envelope[k];
  }
  return 100.0 * sum / kRecallSamples;
}

std::vector<double> CocoIouThresholds() {
  std::vector<double> thresholds;
  for (int i = 0; i < 10; ++i) thresholds.push_back((50 + 5 * i) / 100.0);
  return thresholds;
}

std::optional<double> AveragePrecisionCoco(
    std::span<const Detection> detections, std::span<const GroundTruthBox> gts,
    int category_id, std::span<const double> iou_thresholds) {
  if (iou_thresholds.empty()) {
    throw std::invalid_argument("COCO AP needs at least one IoU threshold");
  }
  std::vector<double> per_threshold;
  for (double t : iou_thresholds) {
    auto ap = AveragePrecision101(
        ComputePrCurve(MatchDetections(detections, gts, t, category_id)));
    if (!ap) return std::nullopt;
    per_threshold.push_back(*ap);
  }
  return Mean(per_threshold);
}

EvalReport Evaluate(std::span<const Detection> detections,
                    std::span<const GroundTruthBox> gts,
                    const CategoryVocabulary& vocabulary,
                    double score_threshold) {
  std::vector<Detection> kept;
  for (const Detection& d : detections) {
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw std::invalid_argument("detection score outside [0, 1]");
    }
    if (!vocabulary.Contains(d.category_id)) {
      throw std::invalid_argument("detection category outside vocabulary");
    }
    if (d.score >= score_threshold) kept.push_back(d);
  }
  for (const GroundTruthBox& g : gts) {
    if (!vocabulary.Contains(g.category_id)) {
      throw std::invalid_argument("ground-truth category outside vocabulary");
    }
  }

  const std::vector<double> thresholds = CocoIouThresholds();
  EvalReport report;
  report.score_threshold = score_threshold;

  std::vector<double> voc50;
  std::vector<double> coco50;
  std::vector<double> coco75;
  std::vector<double> coco;
  std::vector<std::vector<double>> by_threshold(thresholds.size());

  for (int id = 1; id <= vocabulary.size(); ++id) {
    CategoryResult result;
    result.name = vocabulary.Name(id);
    std::vector<double> at_threshold;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const MatchResult match = MatchDetections(kept, gts, thresholds[t], id);
      result.gt_count = match.gt_count;
      const PrCurve curve = ComputePrCurve(match);
      if (curve.gt_count == 0) break;
      at_threshold.push_back(*AveragePrecision101(curve));
      if (t == 0) result.ap50_voc = AveragePrecisionVoc(curve);
    }
    if (result.gt_count > 0) {
      result.ap50 = at_threshold.front();
      result.ap75 = at_threshold[5];
      result.ap = Mean(at_threshold);
      voc50.push_back(*result.ap50_voc);
      coco50.push_back(*result.ap50);
      coco75.push_back(*result.ap75);
      coco.push_back(*result.ap);
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        by_threshold[t].push_back(at_threshold[t]);
      }
    }
    report.per_category.push_back(std::move(result));
  }

  report.ap50_voc = Mean(voc50);
  report.ap50_coco = Mean(coco50);
  report.ap75 = Mean(coco75);
  report.ap = Mean(coco);
  for (const auto& values : by_threshold) {
    report.ap_by_threshold.push_back(Mean(values));
  }
  return report;
}

std::vector<GroundTruthBox> GroundTruthFromManifest(
    const DatasetManifest& manifest) {
  std::vector<GroundTruthBox> gts;
  for (const AnnotatedImage& image : manifest.images) {
    for (const AnnotatedBox& b : image.boxes) {
      gts.push_back(GroundTruthBox{image.image_id, b.box, b.category_id});
    }
  }
  return gts;
}

std::vector<Detection> DetectionsFromManifest(
    const DatasetManifest& predictions, const CategoryVocabulary& vocabulary) {
  std::vector<int> remap(predictions.vocabulary.size() + 1, 0);
  for (int id = 1; id <= predictions.vocabulary.size(); ++id) {
    const auto& name = predictions.vocabulary.Name(id);
    auto target = vocabulary.FindId(name);
    if (!target) {
      throw std::invalid_argument("prediction category '" + name +
                                  "' is not in the ground-truth vocabulary");
    }
    remap[id] = *target;
  }
  std::vector<Detection> detections;
  for (const AnnotatedImage& image : predictions.images) {
    for (const AnnotatedBox& b : image.boxes) {
      detections.push_back(Detection{image.image_id, b.box,
                                     remap.at(b.category_id),
                                     b.score.value_or(1.0)});
    }
  }
  return detections;
}

}  // namespace organdet
