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
#include "organdet/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace organdet {

CategoryVocabulary CategoryVocabulary::PlantOrgans() {
  return CategoryVocabulary({"Leaf", "Flower", "Fruit", "Seed", "Stem", "Root"});
}

CategoryVocabulary::CategoryVocabulary(std::vector<std::string> names) {
  for (std::string& name : names) {
    if (name.empty()) {
      throw std::invalid_argument("category names must be non-empty");
    }
    if (FindId(name)) {
      throw std::invalid_argument("duplicate category name: " + name);
    }
    names_.push_back(std::move(name));
  }
}

std::optional<int> CategoryVocabulary::FindId(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin()) + 1;
}

int CategoryVocabulary::IdOf(std::string_view name) const {
  if (auto id = FindId(name)) return *id;
  throw std::invalid_argument("unknown category: " + std::string(name));
}

const std::string& CategoryVocabulary::Name(int id) const {
  if (!Contains(id)) {
    throw std::out_of_range("category id out of range: " + std::to_string(id));
  }
  return names_[id - 1];
}

int CategoryVocabulary::Add(std::string_view name) {
  if (auto id = FindId(name)) return *id;
  if (name.empty()) {
    throw std::invalid_argument("category names must be non-empty");
  }
  names_.emplace_back(name);
  return size();
}

std::string_view ToString(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
    case Split::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

std::string_view ToString(Provenance provenance) {
  switch (provenance) {
    case Provenance::kManual: return "manual";
    case Provenance::kPredicted: return "predicted";
    case Provenance::kVerified: return "verified";
    case Provenance::kCorrected: return "corrected";
  }
  return "manual";
}

std::optional<Split> ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  if (text == "unassigned") return Split::kUnassigned;
  return std::nullopt;
}

std::optional<Provenance> ParseProvenance(std::string_view text) {
  if (text == "manual") return Provenance::kManual;
  if (text == "predicted") return Provenance::kPredicted;
  if (text == "verified") return Provenance::kVerified;
  if (text == "corrected") return Provenance::kCorrected;
  return std::nullopt;
}

const AnnotatedImage* DatasetManifest::FindImage(
    std::string_view image_id) const {
  for (const AnnotatedImage& image : images) {
    if (image.image_id == image_id) return &image;
  }
  return nullptr;
}

std::size_t DatasetManifest::box_count() const {
  std::size_t n = 0;
  for (const AnnotatedImage& image : images) n += image.boxes.size();
  return n;
}

std::vector<std::string> ValidateImage(const AnnotatedImage& image,
                                       const CategoryVocabulary& vocabulary) {
  std::vector<std::string> problems;
  const std::string where = "image '" + image.image_id + "'";
  if (image.image_id.empty()) problems.push_back("image with empty id");
  if (image.width <= 0 || image.height <= 0) {
    problems.push_back(where + ": non-positive dimensions");
  }
  if (!(image.scale > 0) || !std::isfinite(image.scale)) {
    problems.push_back(where + ": scale must be positive");
  }
  for (std::size_t i = 0; i < image.boxes.size(); ++i) {
    const AnnotatedBox& b = image.boxes[i];
    const std::string box_where = where + " box " + std::to_string(i);
    if (!b.box.valid()) {
      problems.push_back(box_where + ": invalid coordinates");
    } else if (b.box.x_min < 0 || b.box.y_min < 0 ||
               b.box.x_max > image.width || b.box.y_max > image.height) {
      problems.push_back(box_where + ": outside the image");
    }
    if (!vocabulary.Contains(b.category_id)) {
      problems.push_back(box_where + ": unknown category id " +
                         std::to_string(b.category_id));
    }
    const bool predicted = b.provenance == Provenance::kPredicted;
    if (predicted != b.score.has_value()) {
      problems.push_back(box_where +
                         (predicted ? ": predicted box without score"
                                    : ": score on a non-predicted box"));
    }
    if (b.score && !(*b.score >= 0.0 && *b.score <= 1.0)) {
      problems.push_back(box_where + ": score outside [0, 1]");
    }
  }
  return problems;
}

std::vector<std::string> ValidateManifest(const DatasetManifest& manifest) {
  std::vector<std::string> problems;
  std::set<std::string_view> seen;
  for (const AnnotatedImage& image : manifest.images) {
    if (!seen.insert(image.image_id).second) {
      problems.push_back("duplicate image id '" + image.image_id + "'");
    }
    auto more = ValidateImage(image, manifest.vocabulary);
    problems.insert(problems.end(), more.begin(), more.end());
  }
  return problems;
}

void CheckManifest(const DatasetManifest& manifest) {
  const auto problems = ValidateManifest(manifest);
  if (problems.empty()) return;
  std::string message = "invalid manifest:";
  for (const std::string& p : problems) message += "\n  " + p;
  throw std::invalid_argument(message);
}

AnnotatedImage RescaleImage(const AnnotatedImage& image, int target_width,
                            int target_height) {
  const ScaleTransform t =
      FitRescale(image.width, image.height, target_width, target_height);
  AnnotatedImage out = image;
  out.width = t.output_width();
  out.height = t.output_height();
  out.scale = image.scale * t.scale;
  for (AnnotatedBox& b : out.boxes) {
    b.box = Clip(TransformBox(b.box, t), out.width, out.height);
  }
  return out;
}

DatasetManifest RescaleManifest(const DatasetManifest& manifest,
                                int target_width, int target_height) {
  if (target_width <= 0 || target_height <= 0) {
    throw std::invalid_argument("rescale: target dimensions must be positive");
  }
  DatasetManifest out;
  out.vocabulary = manifest.vocabulary;
  out.source = manifest.source;
  out.images.reserve(manifest.images.size());
  for (const AnnotatedImage& image : manifest.images) {
    out.images.push_back(RescaleImage(image, target_width, target_height));
  }
  return out;
}

}  // namespace organdet
