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
#include "review_json.h"

#include "organdet/errors.h"

namespace organdet::review_json {

using json_codec::Get;
using json_codec::Member;

json SnapshotToJson(const BoxSnapshot& snapshot,
                    const CategoryVocabulary& vocabulary) {
  return {{"bbox", json_codec::BoxToJson(snapshot.box)},
          {"category", vocabulary.Name(snapshot.category_id)}};
}

BoxSnapshot SnapshotFromJson(const json& value,
                             const CategoryVocabulary& vocabulary,
                             const std::string& source) {
  BoxSnapshot snapshot;
  snapshot.box = json_codec::BoxFromJson(Member(value, "bbox", source), source);
  const auto name = Get<std::string>(value, "category", source);
  const auto id = vocabulary.FindId(name);
  if (!id) throw ParseError(source, "unknown category '" + name + "'");
  snapshot.category_id = *id;
  return snapshot;
}

json EventToJson(const CorrectionEvent& event,
                 const CategoryVocabulary& vocabulary) {
  json out = {{"sequence", event.sequence},
              {"image_id", event.image_id},
              {"action", std::string(ToString(event.action))},
              {"timestamp", event.timestamp},
              {"reviewer", event.reviewer}};
  if (event.box_index) out["box_index"] = *event.box_index;
  if (event.before) out["before"] = SnapshotToJson(*event.before, vocabulary);
  if (event.after) out["after"] = SnapshotToJson(*event.after, vocabulary);
  if (!event.idempotency_key.empty()) {
    out["idempotency_key"] = event.idempotency_key;
  }
  return out;
}

CorrectionEvent EventFromJson(const json& value,
                              const CategoryVocabulary& vocabulary,
                              const std::string& source,
                              const std::string& image_id) {
  if (!value.is_object()) throw ParseError(source, "event must be an object");
  CorrectionEvent event;
  event.image_id = value.contains("image_id")
                       ? Get<std::string>(value, "image_id", source)
                       : image_id;
  const auto action = Get<std::string>(value, "action", source);
  const auto parsed = ParseCorrectionAction(action);
  if (!parsed) throw ParseError(source, "unknown action '" + action + "'");
  event.action = *parsed;
  if (value.contains("sequence")) {
    event.sequence = value["sequence"].get<std::uint64_t>();
  }
  if (value.contains("box_index")) {
    const auto index = Get<long long>(value, "box_index", source);
    if (index < 0) throw ParseError(source, "box_index must be >= 0");
    event.box_index = static_cast<std::size_t>(index);
  }
  if (value.contains("before")) {
    event.before = SnapshotFromJson(value["before"], vocabulary, source);
  }
  if (value.contains("after")) {
    event.after = SnapshotFromJson(value["after"], vocabulary, source);
  }
  if (value.contains("timestamp")) {
    event.timestamp = Get<std::string>(value, "timestamp", source);
  }
  if (value.contains("reviewer")) {
    event.reviewer = Get<std::string>(value, "reviewer", source);
  }
  if (value.contains("idempotency_key")) {
    event.idempotency_key = Get<std::string>(value, "idempotency_key", source);
  }
  return event;
}

json ColorToJson(const DisplayColor& color) {
  return {{"name", color.name}, {"hex", color.hex}};
}

json AnnotationsToJson(const ImageAnnotations& annotations,
                       const CategoryVocabulary& vocabulary) {
  const AnnotatedImage& image = annotations.image;
  json boxes = json::array();
  for (std::size_t i = 0; i < image.boxes.size(); ++i) {
    json b = json_codec::AnnotatedBoxToJson(image.boxes[i], vocabulary);
    b["index"] = i;
    b["color"] = ColorToJson(annotations.colors[i]);
    boxes.push_back(std::move(b));
  }
  json palette = json::object();
  for (const std::string& name : vocabulary.names()) {
    palette[name] = ColorToJson(CategoryColor(name));
  }
  return {{"version", 1},
          {"image",
           {{"id", image.image_id},
            {"file", image.file_path},
            {"width", image.width},
            {"height", image.height},
            {"split", std::string(ToString(image.split))},
            {"scale", image.scale}}},
          {"status", std::string(ToString(annotations.status))},
          {"boxes", std::move(boxes)},
          {"colors", std::move(palette)}};
}

json SummaryToJson(const ImageSummary& summary,
                   const CategoryVocabulary& vocabulary) {
  json counts = json::object();
  for (int id = 1; id <= vocabulary.size(); ++id) {
    counts[vocabulary.Name(id)] = summary.box_counts.at(id - 1);
  }
  return {{"id", summary.image_id},
          {"file", summary.file_path},
          {"width", summary.width},
          {"height", summary.height},
          {"split", std::string(ToString(summary.split))},
          {"status", std::string(ToString(summary.status))},
          {"box_counts", std::move(counts)},
          {"box_total", summary.box_total}};
}

json StatusCountsToJson(const StatusCounts& counts) {
  return {{"unverified", counts.unverified},
          {"verified", counts.verified},
          {"corrected", counts.corrected}};
}

}  // namespace organdet::review_json
