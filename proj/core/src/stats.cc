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
#include "organdet/stats.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace organdet {
namespace {

constexpr std::array<Split, DatasetStats::kSplitCount> kSplits = {
    Split::kTrain, Split::kTest, Split::kUnassigned};

std::size_t SplitIndex(Split split) { return static_cast<std::size_t>(split); }

}  // namespace

DatasetStats::DatasetStats(std::vector<std::string> categories)
    : categories_(std::move(categories)) {
  for (auto& row : counts_) row.assign(categories_.size(), 0);
}

void DatasetStats::AddImage(const AnnotatedImage& image) {
  const std::size_t s = SplitIndex(image.split);
  ++images_[s];
  for (const AnnotatedBox& b : image.boxes) {
    if (b.category_id >= 1 &&
        static_cast<std::size_t>(b.category_id) <= categories_.size()) {
      ++counts_[s][b.category_id - 1];
    }
  }
}

std::size_t DatasetStats::count(int category, Split split) const {
  return counts_[SplitIndex(split)].at(category - 1);
}

std::size_t DatasetStats::category_total(int category) const {
  std::size_t n = 0;
  for (Split s : kSplits) n += count(category, s);
  return n;
}

std::size_t DatasetStats::split_total(Split split) const {
  const auto& row = counts_[SplitIndex(split)];
  return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

std::size_t DatasetStats::total() const {
  std::size_t n = 0;
  for (Split s : kSplits) n += split_total(s);
  return n;
}

std::size_t DatasetStats::image_count(Split split) const {
  return images_[SplitIndex(split)];
}

std::size_t DatasetStats::image_count() const {
  return std::accumulate(images_.begin(), images_.end(), std::size_t{0});
}

double DatasetStats::mean_boxes_per_image() const {
  const std::size_t images = image_count();
  return images == 0 ? 0.0 : static_cast<double>(total()) / images;
}

DatasetStats ComputeStats(const DatasetManifest& manifest) {
  DatasetStats stats(manifest.vocabulary.names());
  for (const AnnotatedImage& image : manifest.images) stats.AddImage(image);
  return stats;
}

std::string FormatStatsTable(const DatasetStats& stats) {
  struct Column {
    std::string title;
    std::string subtitle;
    std::vector<std::size_t> values;  // per category, then total
  };
  const int n = static_cast<int>(stats.categories().size());
  auto split_column = [&](const char* title, Split split) {
    Column c{title, fmt::format("({} images)", stats.image_count(split)), {}};
    for (int id = 1; id <= n; ++id) c.values.push_back(stats.count(id, split));
    c.values.push_back(stats.split_total(split));
    return c;
  };
  std::vector<Column> columns = {split_column("Training subset", Split::kTrain),
                                 split_column("Test subset", Split::kTest)};
  if (stats.image_count(Split::kUnassigned) > 0) {
    columns.push_back(split_column("Unassigned", Split::kUnassigned));
  }
  Column complete{"Complete dataset",
                  fmt::format("({} images)", stats.image_count()), {}};
  for (int id = 1; id <= n; ++id) {
    complete.values.push_back(stats.category_total(id));
  }
  complete.values.push_back(stats.total());
  columns.push_back(std::move(complete));

  std::size_t label_width = std::string_view("Category").size();
  for (const auto& name : stats.categories()) {
    label_width = std::max(label_width, name.size());
  }
  std::vector<std::size_t> widths;
  for (const Column& c : columns) {
    std::size_t w = std::max(c.title.size(), c.subtitle.size());
    for (std::size_t v : c.values) w = std::max(w, fmt::format("{}", v).size());
    widths.push_back(w);
  }

  std::string out;
  auto row = [&](const std::string& label, auto cell) {
    out += fmt::format("{:<{}}", label, label_width);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out += fmt::format(" | {:>{}}", cell(i), widths[i]);
    }
    out += "\n";
  };
  auto rule = [&] {
    std::size_t len = label_width;
    for (std::size_t w : widths) len += w + 3;
    out += std::string(len, '-') + "\n";
  };
  row("Category", [&](std::size_t i) { return columns[i].title; });
  row("", [&](std::size_t i) { return columns[i].subtitle; });
  rule();
  for (int id = 1; id <= n; ++id) {
    row(stats.categories()[id - 1],
        [&](std::size_t i) { return fmt::format("{}", columns[i].values[id - 1]); });
  }
  rule();
  row("Total", [&](std::size_t i) {
    return fmt::format("{}", columns[i].values.back());
  });
  out += fmt::format("Mean boxes per image: {:.1f}\n",
                     stats.mean_boxes_per_image());
  return out;
}

std::string StatsToJson(const DatasetStats& stats) {
  using nlohmann::json;
  json categories = json::array();
  for (int id = 1; id <= static_cast<int>(stats.categories().size()); ++id) {
    categories.push_back({{"name", stats.categories()[id - 1]},
                          {"train", stats.count(id, Split::kTrain)},
                          {"test", stats.count(id, Split::kTest)},
                          {"unassigned", stats.count(id, Split::kUnassigned)},
                          {"total", stats.category_total(id)}});
  }
  json out = {
      {"version", 1},
      {"categories", std::move(categories)},
      {"totals",
       {{"train", stats.split_total(Split::kTrain)},
        {"test", stats.split_total(Split::kTest)},
        {"unassigned", stats.split_total(Split::kUnassigned)},
        {"total", stats.total()}}},
      {"images",
       {{"train", stats.image_count(Split::kTrain)},
        {"test", stats.image_count(Split::kTest)},
        {"unassigned", stats.image_count(Split::kUnassigned)},
        {"total", stats.image_count()}}},
      {"mean_boxes_per_image", stats.mean_boxes_per_image()}};
  return out.dump(2) + "\n";
}

}  // namespace organdet
