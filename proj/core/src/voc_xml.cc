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
#include "organdet/voc_xml.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "organdet/errors.h"

namespace organdet {
namespace {

namespace pt = boost::property_tree;

std::string Trimmed(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double ReadNumber(const pt::ptree& node, const std::string& path,
                  const std::string& source) {
  auto text = node.get_optional<std::string>(path);
  if (!text) throw ParseError(source, "missing <" + path + ">");
  std::size_t consumed = 0;
  double value = 0.0;
  const std::string trimmed = Trimmed(*text);
  try {
    value = std::stod(trimmed, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (trimmed.empty() || consumed != trimmed.size() || !std::isfinite(value)) {
    throw ParseError(source, "<" + path + "> is not a number: '" + *text + "'");
  }
  return value;
}

std::string FormatCoordinate(double v) { return fmt::format("{}", v); }

}  // namespace

AnnotatedImage ParseVocXml(std::string_view document,
                           CategoryVocabulary& vocabulary,
                           const VocParseOptions& options) {
  const std::string& source = options.source;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(source, std::string("malformed XML: ") + e.message());
  }
  auto root = tree.get_child_optional("annotation");
  if (!root) throw ParseError(source, "missing <annotation> root element");

  AnnotatedImage image;
  image.split = options.split;
  const std::string filename =
      Trimmed(root->get<std::string>("filename", ""));
  image.image_id = filename.empty()
                       ? options.fallback_image_id
                       : std::filesystem::path(filename).stem().string();
  if (image.image_id.empty()) {
    throw ParseError(source, "no <filename> and no fallback image id");
  }
  image.file_path = Trimmed(root->get<std::string>("path", ""));
  if (image.file_path.empty()) image.file_path = filename;

  auto size = root->get_child_optional("size");
  if (!size) throw ParseError(source, "missing <size> block");
  const double width = ReadNumber(*size, "width", source);
  const double height = ReadNumber(*size, "height", source);
  if (width < 1 || height < 1 || width != std::floor(width) ||
      height != std::floor(height)) {
    throw ParseError(source, "<size> must hold positive integer dimensions");
  }
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);

  for (const auto& [tag, object] : *root) {
    if (tag != "object") continue;
    const std::string name = Trimmed(object.get<std::string>("name", ""));
    if (name.empty()) throw ParseError(source, "object without <name>");
    std::optional<int> id = vocabulary.FindId(name);
    if (!id) {
      if (!options.allow_new_categories) {
        throw ParseError(source, "unknown category '" + name + "'");
      }
      id = vocabulary.Add(name);
    }
    auto bndbox = object.get_child_optional("bndbox");
    if (!bndbox) {
      throw ParseError(source, "object '" + name + "' without <bndbox>");
    }
    BoundingBox box{ReadNumber(*bndbox, "xmin", source),
                    ReadNumber(*bndbox, "ymin", source),
                    ReadNumber(*bndbox, "xmax", source),
                    ReadNumber(*bndbox, "ymax", source)};
    if (box.x_max < box.x_min || box.y_max < box.y_min) {
      throw ParseError(source, fmt::format("inverted box for '{}': ({}, {}, "
                                           "{}, {})",
                                           name, box.x_min, box.y_min,
                                           box.x_max, box.y_max));
    }
    image.boxes.push_back(AnnotatedBox{Clip(box, image.width, image.height),
                                       *id, Provenance::kManual,
                                       std::nullopt});
  }
  return image;
}

AnnotatedImage ReadVocXmlFile(const std::filesystem::path& path,
                              CategoryVocabulary& vocabulary,
                              VocParseOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (options.source.empty()) options.source = path.string();
  if (options.fallback_image_id.empty()) {
    options.fallback_image_id = path.stem().string();
  }
  return ParseVocXml(buffer.str(), vocabulary, options);
}

std::string WriteVocXml(const AnnotatedImage& image,
                        const CategoryVocabulary& vocabulary) {
  pt::ptree annotation;
  const std::filesystem::path file(image.file_path.empty() ? image.image_id
                                                           : image.file_path);
  annotation.put("folder", file.parent_path().filename().string());
  std::string filename = file.filename().string();
  if (std::filesystem::path(filename).stem().string() != image.image_id) {
    filename = image.image_id + file.extension().string();
  }
  annotation.put("filename", filename);
  annotation.put("path", image.file_path);
  annotation.put("source.database", "Unknown");
  annotation.put("size.width", image.width);
  annotation.put("size.height", image.height);
  annotation.put("size.depth", 3);
  annotation.put("segmented", 0);
  for (const AnnotatedBox& b : image.boxes) {
    pt::ptree object;
    object.put("name", vocabulary.Name(b.category_id));
    object.put("pose", "Unspecified");
    object.put("truncated", 0);
    object.put("difficult", 0);
    object.put("bndbox.xmin", FormatCoordinate(b.box.x_min));
    object.put("bndbox.ymin", FormatCoordinate(b.box.y_min));
    object.put("bndbox.xmax", FormatCoordinate(b.box.x_max));
    object.put("bndbox.ymax", FormatCoordinate(b.box.y_max));
    annotation.add_child("object", object);
  }
  pt::ptree tree;
  tree.add_child("annotation", annotation);
  std::ostringstream out;
  pt::write_xml(out, tree,
                pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

}  // namespace organdet
