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
#ifndef ORGANDET_DATASET_H_
#define ORGANDET_DATASET_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "organdet/geometry.h"

namespace organdet {

// Ordered category names with ids 1..size().
class CategoryVocabulary {
 public:
  // Leaf, Flower, Fruit, Seed, Stem, Root.
  static CategoryVocabulary PlantOrgans();

  CategoryVocabulary() = default;
  // Throws std::invalid_argument on empty or duplicate names.
  explicit CategoryVocabulary(std::vector<std::string> names);

  std::optional<int> FindId(std::string_view name) const;
  // Throws std::invalid_argument for unknown names.
  int IdOf(std::string_view name) const;
  // Throws std::out_of_range for ids outside 1..size().
  const std::string& Name(int id) const;
  bool Contains(int id) const { return id >= 1 && id <= size(); }

  // Returns the id of `name`, appending it if absent.
  int Add(std::string_view name);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const CategoryVocabulary&,
                         const CategoryVocabulary&) = default;

 private:
  std::vector<std::string> names_;
};

enum class Split { kTrain, kTest, kUnassigned };
enum class Provenance { kManual, kPredicted, kVerified, kCorrected };

std::string_view ToString(Split split);
std::string_view ToString(Provenance provenance);
std::optional<Split> ParseSplit(std::string_view text);
std::optional<Provenance> ParseProvenance(std::string_view text);

// Predicted boxes carry a score in [0, 1]; all other provenances carry none.
struct AnnotatedBox {
  BoundingBox box;
  int category_id = 0;
  Provenance provenance = Provenance::kManual;
  std::optional<double> score;

  friend bool operator==(const AnnotatedBox&, const AnnotatedBox&) = default;
};

struct AnnotatedImage {
  std::string image_id;
  std::string file_path;
  int width = 0;
  int height = 0;
  Split split = Split::kUnassigned;
  // Cumulative factor applied to the original scan coordinates.
  double scale = 1.0;
  std::vector<AnnotatedBox> boxes;

  friend bool operator==(const AnnotatedImage&,
                         const AnnotatedImage&) = default;
};

struct DatasetManifest {
  CategoryVocabulary vocabulary = CategoryVocabulary::PlantOrgans();
  std::vector<AnnotatedImage> images;
  std::string source;

  const AnnotatedImage* FindImage(std::string_view image_id) const;
  std::size_t box_count() const;

  friend bool operator==(const DatasetManifest&,
                         const DatasetManifest&) = default;
};

// Every violated manifest invariant, one message each. Empty when valid.
std::vector<std::string> ValidateManifest(const DatasetManifest& manifest);
std::vector<std::string> ValidateImage(const AnnotatedImage& image,
                                       const CategoryVocabulary& vocabulary);

// Throws std::invalid_argument listing the problems ValidateManifest finds.
void CheckManifest(const DatasetManifest& manifest);

// Fits every image into target_width x target_height with one uniform scale
// per image, scaling and clipping its boxes. Throws std::invalid_argument
// for non-positive targets.
DatasetManifest RescaleManifest(const DatasetManifest& manifest,
                                int target_width, int target_height);
AnnotatedImage RescaleImage(const AnnotatedImage& image, int target_width,
                            int target_height);

}  // namespace organdet

#endif  // ORGANDET_DATASET_H_
