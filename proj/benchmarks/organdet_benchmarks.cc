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
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "organdet/anchors.h"
#include "organdet/eval.h"
#include "organdet/geometry.h"
#include "organdet/nms.h"
#include "organdet/roi_pool.h"

namespace organdet {
namespace {

std::vector<BoundingBox> RandomBoxes(std::mt19937_64& rng, std::size_t n,
                                     double extent) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BoundingBox> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 4 + u(rng) * extent / 8;
    const double h = 4 + u(rng) * extent / 8;
    const double x = u(rng) * (extent - w);
    const double y = u(rng) * (extent - h);
    boxes.push_back({x, y, x + w, y + h});
  }
  return boxes;
}

std::vector<double> RandomScores(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores(n);
  for (double& s : scores) s = u(rng);
  return scores;
}

void BM_Iou(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto boxes = RandomBoxes(rng, 1024, 1000.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        IntersectionOverUnion(boxes[i & 1023], boxes[(i + 1) & 1023]));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Iou);

void BM_Nms(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto boxes = RandomBoxes(rng, n, 1000.0);
  const auto scores = RandomScores(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(NonMaxSuppression(boxes, scores, 0.25));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Nms)->RangeMultiplier(4)->Range(64, 4096);

void BM_NmsPerCategory(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto boxes = RandomBoxes(rng, n, 1000.0);
  const auto scores = RandomScores(rng, n);
  std::vector<int> categories(n);
  std::uniform_int_distribution<int> category(1, 6);
  for (int& c : categories) c = category(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(NonMaxSuppression(
        boxes, scores, 0.25, std::span<const int>(categories)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NmsPerCategory)->Arg(1024);

void BM_GenerateAnchors(benchmark::State& state) {
  const AnchorConfig config;
  const auto grids = GridSizesForImage(config, 1165, 800);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateAnchors(config, grids));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(CountAnchors(config, grids)));
}
BENCHMARK(BM_GenerateAnchors);

void BM_RoiMaxPool(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(50 * 76);
  for (double& v : values) v = u(rng);
  const FeatureGrid grid(50, 76, values);
  const auto rois = RandomBoxes(rng, 256, 50.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RoiMaxPool(grid, rois[i++ & 255], 7));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RoiMaxPool);

// Ground truth and noisy detections over `images` sheets of 30 boxes.
void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> jitter(0.0, 4.0);
  std::uniform_int_distribution<int> category(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const CategoryVocabulary vocabulary = CategoryVocabulary::PlantOrgans();
  std::vector<GroundTruthBox> gts;
  std::vector<Detection> detections;
  for (int image = 0; image < state.range(0); ++image) {
    const std::string id = "sheet" + std::to_string(image);
    for (const BoundingBox& b : RandomBoxes(rng, 30, 1165.0)) {
      const int c = category(rng);
      gts.push_back({id, b, c});
      const BoundingBox d{b.x_min + jitter(rng), b.y_min + jitter(rng),
                          b.x_max + jitter(rng), b.y_max + jitter(rng)};
      if (d.valid()) detections.push_back({id, d, c, u(rng)});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(detections, gts, vocabulary, 0.0));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(detections.size()));
}
BENCHMARK(BM_Evaluate)->Arg(16)->Arg(155);

}  // namespace
}  // namespace organdet

BENCHMARK_MAIN();
