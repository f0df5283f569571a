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
#ifndef ORGANDET_MANIFEST_IO_H_
#define ORGANDET_MANIFEST_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "organdet/dataset.h"

namespace organdet {

// Canonical manifest document: a JSON object with "version": 1, "source",
// "categories" [{id, name}] and "images" [{id, file, width, height, split,
// scale, boxes: [{bbox: [x_min, y_min, x_max, y_max], category, provenance,
// score?}]}].
std::string ManifestToJson(const DatasetManifest& manifest);

// Throws ParseError on malformed documents or manifests that fail
// ValidateManifest.
DatasetManifest ParseManifestJson(std::string_view document,
                                  const std::string& source = "");

DatasetManifest ReadManifestFile(const std::filesystem::path& path);
void WriteManifestFile(const std::filesystem::path& path,
                       const DatasetManifest& manifest);

enum class AnnotationFormat { kManifest, kCoco };

struct LoadedAnnotations {
  DatasetManifest manifest;
  AnnotationFormat format = AnnotationFormat::kManifest;
};

// Reads either a canonical manifest or a COCO-style document, telling them
// apart by the presence of "annotations".
LoadedAnnotations ReadAnnotationFile(const std::filesystem::path& path);
std::string SerializeAnnotations(const DatasetManifest& manifest,
                                 AnnotationFormat format);

// Throws ParseError when the file cannot be read.
std::string ReadFileToString(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over `path`.
// Throws std::runtime_error on I/O failure.
void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents);

}  // namespace organdet

#endif  // ORGANDET_MANIFEST_IO_H_
