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
#ifndef ORGANDET_STATS_H_
#define ORGANDET_STATS_H_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "organdet/dataset.h"

namespace organdet {

// Box and image counts per category and split.
class DatasetStats {
 public:
  static constexpr std::size_t kSplitCount = 3;

  DatasetStats() = default;
  explicit DatasetStats(std::vector<std::string> categories);

  void AddImage(const AnnotatedImage& image);

  const std::vector<std::string>& categories() const { return categories_; }
  // `category` is a 1-based vocabulary id.
  std::size_t count(int category, Split split) const;
  std::size_t category_total(int category) const;
  std::size_t split_total(Split split) const;
  std::size_t total() const;
  std::size_t image_count(Split split) const;
  std::size_t image_count() const;
  // Total boxes over total images; 0 for an empty dataset.
  double mean_boxes_per_image() const;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;

 private:
  std::vector<std::string> categories_;
  // counts_[split][category - 1]
  std::array<std::vector<std::size_t>, kSplitCount> counts_;
  std::array<std::size_t, kSplitCount> images_{};
};

DatasetStats ComputeStats(const DatasetManifest& manifest);

// Category rows by split columns (training, test, complete; an
// "unassigned" column is added when such images exist), a Total row and the
// mean boxes per image to one decimal.
std::string FormatStatsTable(const DatasetStats& stats);

// Machine-readable counterpart of FormatStatsTable.
std::string StatsToJson(const DatasetStats& stats);

}  // namespace organdet

#endif  // ORGANDET_STATS_H_
