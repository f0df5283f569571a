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
#include "json_codec.h"

#include <cmath>

#include "organdet/errors.h"

namespace organdet::json_codec {

json Parse(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, std::string("malformed JSON: ") + e.what());
  }
}

const json& Member(const json& object, const char* key,
                   const std::string& source) {
  if (!object.is_object()) throw ParseError(source, "expected a JSON object");
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(source, std::string("missing field '") + key + "'");
  }
  return *it;
}

template <typename T>
T Get(const json& object, const char* key, const std::string& source) {
  const json& value = Member(object, key, source);
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ParseError(source, std::string("field '") + key +
                                 "' has the wrong type");
  }
}

template int Get<int>(const json&, const char*, const std::string&);
template long long Get<long long>(const json&, const char*,
                                  const std::string&);
template double Get<double>(const json&, const char*, const std::string&);
template std::string Get<std::string>(const json&, const char*,
                                      const std::string&);

json BoxToJson(const BoundingBox& box) {
  return json::array({box.x_min, box.y_min, box.x_max, box.y_max});
}

BoundingBox BoxFromJson(const json& value, const std::string& source) {
  if (!value.is_array() || value.size() != 4) {
    throw ParseError(source, "box must be an array of four numbers");
  }
  double c[4];
  for (int i = 0; i < 4; ++i) {
    if (!value[i].is_number()) {
      throw ParseError(source, "box coordinates must be numbers");
    }
    c[i] = value[i].get<double>();
  }
  BoundingBox box{c[0], c[1], c[2], c[3]};
  if (!box.valid()) {
    throw ParseError(source, "box coordinates are inverted or not finite");
  }
  return box;
}

json VocabularyToJson(const CategoryVocabulary& vocabulary) {
  json out = json::array();
  for (int id = 1; id <= vocabulary.size(); ++id) {
    out.push_back({{"id", id}, {"name", vocabulary.Name(id)}});
  }
  return out;
}

CategoryVocabulary VocabularyFromJson(const json& value,
                                      const std::string& source) {
  if (!value.is_array()) {
    throw ParseError(source, "'categories' must be an array");
  }
  std::vector<std::string> names;
  for (const json& entry : value) {
    const int id = Get<int>(entry, "id", source);
    if (id != static_cast<int>(names.size()) + 1) {
      throw ParseError(source, "category ids must be contiguous from 1");
    }
    names.push_back(Get<std::string>(entry, "name", source));
  }
  try {
    return CategoryVocabulary(std::move(names));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, e.what());
  }
}

json AnnotatedBoxToJson(const AnnotatedBox& box,
                        const CategoryVocabulary& vocabulary) {
  json out = {{"bbox", BoxToJson(box.box)},
              {"category", vocabulary.Name(box.category_id)},
              {"provenance", std::string(ToString(box.provenance))}};
  if (box.score) out["score"] = *box.score;
  return out;
}

AnnotatedBox AnnotatedBoxFromJson(const json& value,
                                  const CategoryVocabulary& vocabulary,
                                  const std::string& source) {
  AnnotatedBox box;
  box.box = BoxFromJson(Member(value, "bbox", source), source);
  const auto category = Get<std::string>(value, "category", source);
  const auto id = vocabulary.FindId(category);
  if (!id) throw ParseError(source, "unknown category '" + category + "'");
  box.category_id = *id;
  const auto provenance = Get<std::string>(value, "provenance", source);
  const auto parsed = ParseProvenance(provenance);
  if (!parsed) {
    throw ParseError(source, "unknown provenance '" + provenance + "'");
  }
  box.provenance = *parsed;
  if (value.contains("score") && !value["score"].is_null()) {
    box.score = Get<double>(value, "score", source);
  }
  return box;
}

json ImageToJson(const AnnotatedImage& image,
                 const CategoryVocabulary& vocabulary) {
  json boxes = json::array();
  for (const AnnotatedBox& b : image.boxes) {
    boxes.push_back(AnnotatedBoxToJson(b, vocabulary));
  }
  return {{"id", image.image_id},
          {"file", image.file_path},
          {"width", image.width},
          {"height", image.height},
          {"split", std::string(ToString(image.split))},
          {"scale", image.scale},
          {"boxes", std::move(boxes)}};
}

AnnotatedImage ImageFromJson(const json& value,
                             const CategoryVocabulary& vocabulary,
                             const std::string& source) {
  AnnotatedImage image;
  image.image_id = Get<std::string>(value, "id", source);
  const std::string where = source + " [image '" + image.image_id + "']";
  if (value.contains("file")) {
    image.file_path = Get<std::string>(value, "file", where);
  }
  image.width = Get<int>(value, "width", where);
  image.height = Get<int>(value, "height", where);
  const auto split = Get<std::string>(value, "split", where);
  const auto parsed = ParseSplit(split);
  if (!parsed) throw ParseError(where, "unknown split '" + split + "'");
  image.split = *parsed;
  if (value.contains("scale")) image.scale = Get<double>(value, "scale", where);
  const json& boxes = Member(value, "boxes", where);
  if (!boxes.is_array()) throw ParseError(where, "'boxes' must be an array");
  for (const json& b : boxes) {
    image.boxes.push_back(AnnotatedBoxFromJson(b, vocabulary, where));
  }
  return image;
}

json ManifestToJson(const DatasetManifest& manifest) {
  json images = json::array();
  for (const AnnotatedImage& image : manifest.images) {
    images.push_back(ImageToJson(image, manifest.vocabulary));
  }
  return {{"version", kManifestVersion},
          {"source", manifest.source},
          {"categories", VocabularyToJson(manifest.vocabulary)},
          {"images", std::move(images)}};
}

DatasetManifest ManifestFromJson(const json& value, const std::string& source) {
  const int version = Get<int>(value, "version", source);
  if (version != kManifestVersion) {
    throw ParseError(source,
                     "unsupported manifest version " + std::to_string(version));
  }
  DatasetManifest manifest;
  manifest.vocabulary =
      VocabularyFromJson(Member(value, "categories", source), source);
  if (value.contains("source")) {
    manifest.source = Get<std::string>(value, "source", source);
  }
  const json& images = Member(value, "images", source);
  if (!images.is_array()) throw ParseError(source, "'images' must be an array");
  for (const json& image : images) {
    manifest.images.push_back(
        ImageFromJson(image, manifest.vocabulary, source));
  }
  return manifest;
}

}  // namespace organdet::json_codec
