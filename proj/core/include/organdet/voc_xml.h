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
#ifndef ORGANDET_VOC_XML_H_
#define ORGANDET_VOC_XML_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "organdet/dataset.h"

namespace organdet {

struct VocParseOptions {
  // Name used in error messages.
  std::string source;
  // Image id to use when the document has no <filename>.
  std::string fallback_image_id;
  // Append unknown object names to the vocabulary instead of failing.
  bool allow_new_categories = false;
  Split split = Split::kUnassigned;
};

// Parses one LabelImg / Pascal VOC annotation document. Pixel coordinates
// are taken as-is (no +/-1 adjustment) and boxes are clipped to the image.
// The image id is the stem of <filename>. `vocabulary` is only modified when
// options.allow_new_categories is set.
//
// Throws ParseError on malformed XML, a missing or non-positive <size>, a
// missing or non-numeric coordinate, an inverted box, or an unknown object
// name.
AnnotatedImage ParseVocXml(std::string_view document,
                           CategoryVocabulary& vocabulary,
                           const VocParseOptions& options = {});

// Reads `path` and parses it, using the file stem as fallback image id.
AnnotatedImage ReadVocXmlFile(const std::filesystem::path& path,
                              CategoryVocabulary& vocabulary,
                              VocParseOptions options = {});

// LabelImg-style document for `image`. Scores are not representable and are
// dropped.
std::string WriteVocXml(const AnnotatedImage& image,
                        const CategoryVocabulary& vocabulary);

}  // namespace organdet

#endif  // ORGANDET_VOC_XML_H_
