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
#include "organdet/review_store.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <fmt/format.h>

#include "organdet/errors.h"
#include "organdet/manifest_io.h"
#include "review_json.h"

namespace organdet {
namespace {

std::string UtcNow() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                          now.time_since_epoch())
                          .count() %
                      1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%S", &tm);
  return fmt::format("{}.{:03d}Z", buffer, static_cast<int>(millis));
}

void Require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

BoxSnapshot SnapshotOf(const AnnotatedBox& box) {
  return BoxSnapshot{box.box, box.category_id};
}

}  // namespace

std::string_view ToString(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::kUnverified: return "unverified";
    case ReviewStatus::kVerified: return "verified";
    case ReviewStatus::kCorrected: return "corrected";
  }
  return "unverified";
}

std::string_view ToString(CorrectionAction action) {
  switch (action) {
    case CorrectionAction::kAdd: return "add";
    case CorrectionAction::kDelete: return "delete";
    case CorrectionAction::kMove: return "move";
    case CorrectionAction::kRelabel: return "relabel";
    case CorrectionAction::kApprove: return "approve";
  }
  return "approve";
}

std::optional<ReviewStatus> ParseReviewStatus(std::string_view text) {
  if (text == "unverified") return ReviewStatus::kUnverified;
  if (text == "verified") return ReviewStatus::kVerified;
  if (text == "corrected") return ReviewStatus::kCorrected;
  return std::nullopt;
}

std::optional<CorrectionAction> ParseCorrectionAction(std::string_view text) {
  if (text == "add") return CorrectionAction::kAdd;
  if (text == "delete") return CorrectionAction::kDelete;
  if (text == "move") return CorrectionAction::kMove;
  if (text == "relabel") return CorrectionAction::kRelabel;
  if (text == "approve") return CorrectionAction::kApprove;
  return std::nullopt;
}

DisplayColor CategoryColor(std::string_view category) {
  if (category == "Leaf") return {"blue", "#0000FF"};
  if (category == "Flower") return {"maroon", "#800000"};
  if (category == "Fruit") return {"magenta", "#FF00FF"};
  if (category == "Seed") return {"yellow", "#FFFF00"};
  if (category == "Stem") return {"green", "#008000"};
  if (category == "Root") return {"gray", "#808080"};
  return {"black", "#000000"};
}

ReviewStore::ReviewStore(DatasetManifest initial,
                         std::vector<CorrectionEvent> history, Options options)
    : initial_(std::move(initial)), options_(std::move(options)) {
  CheckManifest(initial_);
  if (!options_.clock) options_.clock = UtcNow;
  entries_.reserve(initial_.images.size());
  for (const AnnotatedImage& image : initial_.images) {
    index_.emplace(image.image_id, entries_.size());
    entries_.push_back(Entry{image, ReviewStatus::kUnverified});
  }
  for (CorrectionEvent& event : history) {
    if (!event.idempotency_key.empty() &&
        idempotency_keys_.contains(event.idempotency_key)) {
      continue;
    }
    auto it = index_.find(event.image_id);
    if (it == index_.end()) {
      throw NotFoundError("history refers to unknown image '" +
                          event.image_id + "'");
    }
    Entry& entry = entries_[it->second];
    Validate(entry, event);
    Commit(entry, event);
    if (!event.idempotency_key.empty()) {
      idempotency_keys_.insert(event.idempotency_key);
    }
    log_.push_back(std::move(event));
  }
}

std::unique_ptr<ReviewStore> ReviewStore::Open(
    const std::filesystem::path& manifest_path,
    const std::filesystem::path& log_path, Options options) {
  DatasetManifest manifest = ReadManifestFile(manifest_path);
  std::vector<CorrectionEvent> history;
  if (std::filesystem::exists(log_path)) {
    std::ifstream in(log_path);
    if (!in) throw ParseError(log_path.string(), "cannot open event log");
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      history.push_back(ParseCorrectionEvent(
          line, manifest.vocabulary,
          log_path.string() + ":" + std::to_string(line_number)));
    }
  }
  options.log_path = log_path;
  return std::make_unique<ReviewStore>(std::move(manifest), std::move(history),
                                       std::move(options));
}

void ReviewStore::Validate(const Entry& entry,
                           const CorrectionEvent& event) const {
  const std::string action(ToString(event.action));
  const bool needs_index = event.action == CorrectionAction::kDelete ||
                           event.action == CorrectionAction::kMove ||
                           event.action == CorrectionAction::kRelabel;
  const bool needs_after = event.action == CorrectionAction::kAdd ||
                           event.action == CorrectionAction::kMove ||
                           event.action == CorrectionAction::kRelabel;
  Require(event.box_index.has_value() == needs_index,
          action + (needs_index ? " requires box_index"
                                : " must not carry box_index"));
  Require(event.before.has_value() == needs_index,
          action + (needs_index ? " requires a before snapshot"
                                : " must not carry a before snapshot"));
  Require(event.after.has_value() == needs_after,
          action + (needs_after ? " requires an after snapshot"
                                : " must not carry an after snapshot"));

  const AnnotatedImage& image = entry.image;
  if (event.after) {
    const BoxSnapshot& after = *event.after;
    Require(vocabulary().Contains(after.category_id),
            "unknown category id " + std::to_string(after.category_id));
    Require(after.box.valid() && after.box.x_min >= 0 &&
                after.box.y_min >= 0 && after.box.x_max <= image.width &&
                after.box.y_max <= image.height,
            fmt::format("box ({}, {}, {}, {}) lies outside the {}x{} image",
                        after.box.x_min, after.box.y_min, after.box.x_max,
                        after.box.y_max, image.width, image.height));
  }
  if (event.action == CorrectionAction::kMove) {
    Require(event.after->category_id == event.before->category_id,
            "move must not change the category; use relabel");
  }
  if (event.action == CorrectionAction::kRelabel) {
    Require(event.after->box == event.before->box,
            "relabel must not change the geometry; use move");
  }
  if (needs_index) {
    const std::size_t index = *event.box_index;
    if (index >= image.boxes.size() ||
        SnapshotOf(image.boxes[index]) != *event.before) {
      throw ConflictError("box " + std::to_string(index) + " of image '" +
                          image.image_id + "' has changed since it was read");
    }
  }
}

void ReviewStore::Commit(Entry& entry, const CorrectionEvent& event) {
  auto& boxes = entry.image.boxes;
  auto corrected = [](const BoxSnapshot& s) {
    return AnnotatedBox{s.box, s.category_id, Provenance::kCorrected,
                        std::nullopt};
  };
  switch (event.action) {
    case CorrectionAction::kAdd:
      boxes.push_back(corrected(*event.after));
      break;
    case CorrectionAction::kDelete:
      boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(*event.box_index));
      break;
    case CorrectionAction::kMove:
    case CorrectionAction::kRelabel:
      boxes[*event.box_index] = corrected(*event.after);
      break;
    case CorrectionAction::kApprove:
      if (entry.status == ReviewStatus::kUnverified) {
        entry.status = ReviewStatus::kVerified;
      }
      return;
  }
  entry.status = ReviewStatus::kCorrected;
}

ImageAnnotations ReviewStore::AnnotationsOf(const Entry& entry) const {
  ImageAnnotations out{entry.image, entry.status, {}};
  out.colors.reserve(entry.image.boxes.size());
  for (const AnnotatedBox& b : entry.image.boxes) {
    out.colors.push_back(CategoryColor(vocabulary().Name(b.category_id)));
  }
  return out;
}

ImageAnnotations ReviewStore::ApplyCorrection(CorrectionEvent event) {
  std::unique_lock lock(mutex_);
  auto it = index_.find(event.image_id);
  if (it == index_.end()) {
    throw NotFoundError("unknown image '" + event.image_id + "'");
  }
  Entry& entry = entries_[it->second];
  if (!event.idempotency_key.empty() &&
      idempotency_keys_.contains(event.idempotency_key)) {
    return AnnotationsOf(entry);
  }
  Validate(entry, event);
  event.sequence = log_.size() + 1;
  event.timestamp = options_.clock();
  if (options_.log_path) {
    std::ofstream out(*options_.log_path, std::ios::app);
    out << CorrectionEventToJson(event, vocabulary()) << '\n';
    out.flush();
    if (!out) {
      throw std::runtime_error("cannot append to " +
                               options_.log_path->string());
    }
  }
  Commit(entry, event);
  if (!event.idempotency_key.empty()) {
    idempotency_keys_.insert(event.idempotency_key);
  }
  log_.push_back(std::move(event));
  return AnnotationsOf(entry);
}

ImagePage ReviewStore::ListImages(const ImageFilter& filter, std::size_t page,
                                  std::size_t page_size) const {
  std::shared_lock lock(mutex_);
  std::vector<const Entry*> matches;
  for (const Entry& entry : entries_) {
    if (filter.status && entry.status != *filter.status) continue;
    if (filter.split && entry.image.split != *filter.split) continue;
    if (filter.category_id &&
        std::none_of(entry.image.boxes.begin(), entry.image.boxes.end(),
                     [&](const AnnotatedBox& b) {
                       return b.category_id == *filter.category_id;
                     })) {
      continue;
    }
    matches.push_back(&entry);
  }
  std::sort(matches.begin(), matches.end(), [](const Entry* a, const Entry* b) {
    return a->image.image_id < b->image.image_id;
  });

  ImagePage out;
  out.total = matches.size();
  out.page = page;
  out.page_size = page_size;
  const std::size_t begin = std::min(matches.size(), page * page_size);
  const std::size_t end = std::min(matches.size(), begin + page_size);
  for (std::size_t i = begin; i < end; ++i) {
    const Entry& entry = *matches[i];
    ImageSummary summary;
    summary.image_id = entry.image.image_id;
    summary.file_path = entry.image.file_path;
    summary.width = entry.image.width;
    summary.height = entry.image.height;
    summary.split = entry.image.split;
    summary.status = entry.status;
    summary.box_counts.assign(vocabulary().size(), 0);
    for (const AnnotatedBox& b : entry.image.boxes) {
      ++summary.box_counts[b.category_id - 1];
    }
    summary.box_total = entry.image.boxes.size();
    out.items.push_back(std::move(summary));
  }
  return out;
}

ImageAnnotations ReviewStore::GetAnnotations(std::string_view image_id) const {
  std::shared_lock lock(mutex_);
  auto it = index_.find(std::string(image_id));
  if (it == index_.end()) {
    throw NotFoundError("unknown image '" + std::string(image_id) + "'");
  }
  return AnnotationsOf(entries_[it->second]);
}

DatasetManifest ReviewStore::ExportManifest(
    const std::set<ReviewStatus>& statuses) const {
  std::shared_lock lock(mutex_);
  DatasetManifest out;
  out.vocabulary = initial_.vocabulary;
  out.source = initial_.source;
  for (const Entry& entry : entries_) {
    if (!statuses.contains(entry.status)) continue;
    AnnotatedImage image = entry.image;
    for (AnnotatedBox& b : image.boxes) {
      if (b.provenance != Provenance::kCorrected) {
        b.provenance = Provenance::kVerified;
      }
      b.score.reset();
    }
    out.images.push_back(std::move(image));
  }
  return out;
}

DatasetStats ReviewStore::Stats() const {
  std::shared_lock lock(mutex_);
  DatasetStats stats(vocabulary().names());
  for (const Entry& entry : entries_) stats.AddImage(entry.image);
  return stats;
}

StatusCounts ReviewStore::CountStatuses() const {
  std::shared_lock lock(mutex_);
  StatusCounts counts;
  for (const Entry& entry : entries_) {
    switch (entry.status) {
      case ReviewStatus::kUnverified: ++counts.unverified; break;
      case ReviewStatus::kVerified: ++counts.verified; break;
      case ReviewStatus::kCorrected: ++counts.corrected; break;
    }
  }
  return counts;
}

std::vector<CorrectionEvent> ReviewStore::Log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

std::string ReviewStore::SnapshotJson() const {
  std::shared_lock lock(mutex_);
  json_codec::json images = json_codec::json::array();
  for (const Entry& entry : entries_) {
    json_codec::json image =
        json_codec::ImageToJson(entry.image, vocabulary());
    image["status"] = std::string(ToString(entry.status));
    images.push_back(std::move(image));
  }
  return json_codec::json{{"version", json_codec::kManifestVersion},
                          {"categories",
                           json_codec::VocabularyToJson(vocabulary())},
                          {"images", std::move(images)}}
      .dump();
}

std::string CorrectionEventToJson(const CorrectionEvent& event,
                                  const CategoryVocabulary& vocabulary) {
  return review_json::EventToJson(event, vocabulary).dump();
}

CorrectionEvent ParseCorrectionEvent(std::string_view document,
                                     const CategoryVocabulary& vocabulary,
                                     const std::string& source) {
  return review_json::EventFromJson(json_codec::Parse(document, source),
                                    vocabulary, source);
}

}  // namespace organdet
