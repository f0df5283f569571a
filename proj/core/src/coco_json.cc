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
#include "organdet/coco_json.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>

#include "json_codec.h"
#include "organdet/errors.h"

namespace organdet {
namespace {

using json_codec::Get;
using json_codec::json;
using json_codec::Member;

}  // namespace

std::string WriteCocoJson(const DatasetManifest& manifest) {
  std::vector<std::size_t> order(manifest.images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return manifest.images[a].image_id <
                            manifest.images[b].image_id;
                   });

  json images = json::array();
  json annotations = json::array();
  long long annotation_id = 1;
  long long image_number = 1;
  for (std::size_t idx : order) {
    const AnnotatedImage& image = manifest.images[idx];
    json entry = {{"id", image_number},
                  {"file_name", image.file_path.empty() ? image.image_id
                                                        : image.file_path},
                  {"width", image.width},
                  {"height", image.height},
                  {"image_key", image.image_id},
                  {"split", std::string(ToString(image.split))}};
    if (image.scale != 1.0) entry["scale"] = image.scale;
    images.push_back(std::move(entry));
    for (const AnnotatedBox& b : image.boxes) {
      json annotation = {
          {"id", annotation_id++},
          {"image_id", image_number},
          {"category_id", b.category_id},
          {"bbox", json::array({b.box.x_min, b.box.y_min, b.box.width(),
                                b.box.height()})},
          {"area", Area(b.box)},
          {"iscrowd", 0},
          {"provenance", std::string(ToString(b.provenance))}};
      if (b.score) annotation["score"] = *b.score;
      annotations.push_back(std::move(annotation));
    }
    ++image_number;
  }
  json document = {{"info", {{"description", manifest.source}}},
                   {"images", std::move(images)},
                   {"annotations", std::move(annotations)},
                   {"categories",
                    json_codec::VocabularyToJson(manifest.vocabulary)}};
  return document.dump(2) + "\n";
}

DatasetManifest ReadCocoJson(std::string_view document,
                             const std::string& source) {
  const json root = json_codec::Parse(document, source);
  const json& categories = Member(root, "categories", source);
  const json& images = Member(root, "images", source);
  const json& annotations = Member(root, "annotations", source);
  if (!categories.is_array() || !images.is_array() ||
      !annotations.is_array()) {
    throw ParseError(source,
                     "'images', 'annotations' and 'categories' must be arrays");
  }

  DatasetManifest manifest;
  if (root.contains("info") && root["info"].is_object() &&
      root["info"].contains("description") &&
      root["info"]["description"].is_string()) {
    manifest.source = root["info"]["description"].get<std::string>();
  }

  std::map<long long, std::string> category_names;
  for (const json& c : categories) {
    const auto id = Get<long long>(c, "id", source);
    if (!category_names.emplace(id, Get<std::string>(c, "name", source))
             .second) {
      throw ParseError(source, "duplicate category id " + std::to_string(id));
    }
  }
  std::vector<std::string> names;
  std::map<long long, int> category_index;
  for (const auto& [id, name] : category_names) {
    names.push_back(name);
    category_index[id] = static_cast<int>(names.size());
  }
  try {
    manifest.vocabulary = CategoryVocabulary(std::move(names));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, e.what());
  }

  std::map<long long, std::size_t> image_index;
  for (const json& entry : images) {
    const auto id = Get<long long>(entry, "id", source);
    AnnotatedImage image;
    image.file_path = entry.contains("file_name")
                          ? Get<std::string>(entry, "file_name", source)
                          : std::string();
    if (entry.contains("image_key")) {
      image.image_id = Get<std::string>(entry, "image_key", source);
    } else if (!image.file_path.empty()) {
      image.image_id = std::filesystem::path(image.file_path).stem().string();
    } else {
      image.image_id = std::to_string(id);
    }
    image.width = Get<int>(entry, "width", source);
    image.height = Get<int>(entry, "height", source);
    if (entry.contains("split")) {
      const auto split = ParseSplit(Get<std::string>(entry, "split", source));
      if (!split) throw ParseError(source, "unknown split value");
      image.split = *split;
    }
    if (entry.contains("scale")) {
      image.scale = Get<double>(entry, "scale", source);
    }
    if (!image_index.emplace(id, manifest.images.size()).second) {
      throw ParseError(source, "duplicate image id " + std::to_string(id));
    }
    manifest.images.push_back(std::move(image));
  }

  for (const json& a : annotations) {
    const auto image_id = Get<long long>(a, "image_id", source);
    const auto category_id = Get<long long>(a, "category_id", source);
    auto image_it = image_index.find(image_id);
    if (image_it == image_index.end()) {
      throw ParseError(source, "annotation refers to unknown image id " +
                                   std::to_string(image_id));
    }
    auto category_it = category_index.find(category_id);
    if (category_it == category_index.end()) {
      throw ParseError(source, "annotation refers to unknown category id " +
                                   std::to_string(category_id));
    }
    const json& bbox = Member(a, "bbox", source);
    if (!bbox.is_array() || bbox.size() != 4 ||
        !std::all_of(bbox.begin(), bbox.end(),
                     [](const json& v) { return v.is_number(); })) {
      throw ParseError(source, "bbox must be [x, y, width, height]");
    }
    const double x = bbox[0].get<double>();
    const double y = bbox[1].get<double>();
    const double w = bbox[2].get<double>();
    const double h = bbox[3].get<double>();
    const BoundingBox box{x, y, x + w, y + h};
    if (w < 0 || h < 0 || !box.valid()) {
      throw ParseError(source, "bbox with negative or non-finite extent");
    }
    AnnotatedImage& image = manifest.images[image_it->second];
    AnnotatedBox annotated;
    annotated.box = Clip(box, image.width, image.height);
    annotated.category_id = category_it->second;
    if (a.contains("score") && !a["score"].is_null()) {
      annotated.score = Get<double>(a, "score", source);
    }
    if (a.contains("provenance")) {
      const auto provenance =
          ParseProvenance(Get<std::string>(a, "provenance", source));
      if (!provenance) throw ParseError(source, "unknown provenance value");
      annotated.provenance = *provenance;
    } else {
      annotated.provenance =
          annotated.score ? Provenance::kPredicted : Provenance::kManual;
    }
    image.boxes.push_back(annotated);
  }

  const auto problems = ValidateManifest(manifest);
  if (!problems.empty()) throw ParseError(source, problems.front());
  return manifest;
}

}  // namespace organdet
