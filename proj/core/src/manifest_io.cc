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
#include "organdet/manifest_io.h"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "json_codec.h"
#include "organdet/coco_json.h"
#include "organdet/errors.h"

namespace organdet {

std::string ManifestToJson(const DatasetManifest& manifest) {
  return json_codec::ManifestToJson(manifest).dump(2) + "\n";
}

DatasetManifest ParseManifestJson(std::string_view document,
                                  const std::string& source) {
  DatasetManifest manifest = json_codec::ManifestFromJson(
      json_codec::Parse(document, source), source);
  const auto problems = ValidateManifest(manifest);
  if (!problems.empty()) throw ParseError(source, problems.front());
  return manifest;
}

DatasetManifest ReadManifestFile(const std::filesystem::path& path) {
  return ParseManifestJson(ReadFileToString(path), path.string());
}

void WriteManifestFile(const std::filesystem::path& path,
                       const DatasetManifest& manifest) {
  WriteFileAtomically(path, ManifestToJson(manifest));
}

LoadedAnnotations ReadAnnotationFile(const std::filesystem::path& path) {
  const std::string text = ReadFileToString(path);
  const auto document = json_codec::Parse(text, path.string());
  if (document.is_object() && document.contains("annotations")) {
    return {ReadCocoJson(text, path.string()), AnnotationFormat::kCoco};
  }
  return {ParseManifestJson(text, path.string()), AnnotationFormat::kManifest};
}

std::string SerializeAnnotations(const DatasetManifest& manifest,
                                 AnnotationFormat format) {
  return format == AnnotationFormat::kCoco ? WriteCocoJson(manifest)
                                           : ManifestToJson(manifest);
}

std::string ReadFileToString(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot replace " + path.string() + ": " +
                             ec.message());
  }
}

}  // namespace organdet
