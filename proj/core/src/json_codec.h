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
// nlohmann::json codecs shared by the core sources. Not installed.
#ifndef ORGANDET_SRC_JSON_CODEC_H_
#define ORGANDET_SRC_JSON_CODEC_H_

#include <string>

#include <nlohmann/json.hpp>

#include "organdet/dataset.h"
#include "organdet/geometry.h"

namespace organdet::json_codec {

using nlohmann::json;

inline constexpr int kManifestVersion = 1;

json BoxToJson(const BoundingBox& box);
BoundingBox BoxFromJson(const json& value, const std::string& source);

json VocabularyToJson(const CategoryVocabulary& vocabulary);
CategoryVocabulary VocabularyFromJson(const json& value,
                                      const std::string& source);

json AnnotatedBoxToJson(const AnnotatedBox& box,
                        const CategoryVocabulary& vocabulary);
AnnotatedBox AnnotatedBoxFromJson(const json& value,
                                  const CategoryVocabulary& vocabulary,
                                  const std::string& source);

json ImageToJson(const AnnotatedImage& image,
                 const CategoryVocabulary& vocabulary);
AnnotatedImage ImageFromJson(const json& value,
                             const CategoryVocabulary& vocabulary,
                             const std::string& source);

json ManifestToJson(const DatasetManifest& manifest);
DatasetManifest ManifestFromJson(const json& value, const std::string& source);

// Parses text, converting nlohmann exceptions into ParseError.
json Parse(std::string_view text, const std::string& source);

// Typed member access that reports the offending key through ParseError.
const json& Member(const json& object, const char* key,
                   const std::string& source);
template <typename T>
T Get(const json& object, const char* key, const std::string& source);

}  // namespace organdet::json_codec

#endif  // ORGANDET_SRC_JSON_CODEC_H_
