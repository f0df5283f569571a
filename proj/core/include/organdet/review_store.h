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
#ifndef ORGANDET_REVIEW_STORE_H_
#define ORGANDET_REVIEW_STORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "organdet/dataset.h"
#include "organdet/stats.h"

namespace organdet {

// unverified -> verified | corrected, verified -> corrected.
enum class ReviewStatus { kUnverified, kVerified, kCorrected };
enum class CorrectionAction { kAdd, kDelete, kMove, kRelabel, kApprove };

std::string_view ToString(ReviewStatus status);
std::string_view ToString(CorrectionAction action);
std::optional<ReviewStatus> ParseReviewStatus(std::string_view text);
std::optional<CorrectionAction> ParseCorrectionAction(std::string_view text);

struct BoxSnapshot {
  BoundingBox box;
  int category_id = 0;

  friend bool operator==(const BoxSnapshot&, const BoxSnapshot&) = default;
};

// One reviewer edit. Boxes are addressed by position in the image's box
// list; `before` must match the box currently at that position.
//
//   add:      after
//   delete:   box_index, before
//   move:     box_index, before, after (same category)
//   relabel:  box_index, before, after (same geometry)
//   approve:  nothing
struct CorrectionEvent {
  std::uint64_t sequence = 0;  // assigned by the store, from 1
  std::string image_id;
  CorrectionAction action = CorrectionAction::kApprove;
  std::optional<std::size_t> box_index;
  std::optional<BoxSnapshot> before;
  std::optional<BoxSnapshot> after;
  std::string timestamp;  // assigned by the store
  std::string reviewer;
  // Non-empty keys make resubmission a no-op.
  std::string idempotency_key;

  friend bool operator==(const CorrectionEvent&,
                         const CorrectionEvent&) = default;
};

// Display colour of a category in overlays.
struct DisplayColor {
  std::string name;
  std::string hex;

  friend bool operator==(const DisplayColor&, const DisplayColor&) = default;
};

// Leaf blue, Flower maroon, Fruit magenta, Seed yellow, Stem green,
// Root gray. Other categories are black.
DisplayColor CategoryColor(std::string_view category);

struct ImageFilter {
  std::optional<ReviewStatus> status;
  std::optional<int> category_id;  // images holding at least one such box
  std::optional<Split> split;
};

struct ImageSummary {
  std::string image_id;
  std::string file_path;
  int width = 0;
  int height = 0;
  Split split = Split::kUnassigned;
  ReviewStatus status = ReviewStatus::kUnverified;
  std::vector<std::size_t> box_counts;  // per vocabulary category
  std::size_t box_total = 0;
};

struct ImagePage {
  std::vector<ImageSummary> items;
  std::size_t total = 0;  // matches across all pages
  std::size_t page = 0;
  std::size_t page_size = 0;
};

struct ImageAnnotations {
  AnnotatedImage image;
  ReviewStatus status = ReviewStatus::kUnverified;
  std::vector<DisplayColor> colors;  // one per box
};

struct StatusCounts {
  std::size_t unverified = 0;
  std::size_t verified = 0;
  std::size_t corrected = 0;
};

// Working copy of a manifest under review plus its append-only correction
// log. The log alone determines the working copy: constructing a store from
// the same initial manifest and history reproduces the same state.
//
// Thread-safe. Readers share a lock and receive copies; mutations are
// serialized.
class ReviewStore {
 public:
  struct Options {
    // Returns the timestamp stamped on new events.
    std::function<std::string()> clock;
    // When set, every accepted event is appended to this JSON-lines file
    // before it is applied.
    std::optional<std::filesystem::path> log_path;
  };

  // Replays `history` over `initial`. Throws std::invalid_argument if the
  // manifest is invalid, or the error of the first history event that does
  // not apply.
  explicit ReviewStore(DatasetManifest initial,
                       std::vector<CorrectionEvent> history = {},
                       Options options = {});

  // Loads the manifest and, if `log_path` exists, replays it; later events
  // are appended to `log_path`.
  static std::unique_ptr<ReviewStore> Open(
      const std::filesystem::path& manifest_path,
      const std::filesystem::path& log_path, Options options = {});

  ReviewStore(const ReviewStore&) = delete;
  ReviewStore& operator=(const ReviewStore&) = delete;

  // Sorted by image id; `page` counts from 0.
  ImagePage ListImages(const ImageFilter& filter, std::size_t page = 0,
                       std::size_t page_size = 50) const;

  // Throws NotFoundError for unknown images.
  ImageAnnotations GetAnnotations(std::string_view image_id) const;

  // Validates and applies `event`, stamping sequence and timestamp.
  // Throws NotFoundError for unknown images, std::invalid_argument for
  // malformed events or boxes outside the image, ConflictError when
  // `before` does not match the current box.
  ImageAnnotations ApplyCorrection(CorrectionEvent event);

  // Images whose status is in `statuses`, with untouched boxes marked
  // verified and scores dropped.
  DatasetManifest ExportManifest(
      const std::set<ReviewStatus>& statuses = {
          ReviewStatus::kVerified, ReviewStatus::kCorrected}) const;

  DatasetStats Stats() const;
  StatusCounts CountStatuses() const;
  std::vector<CorrectionEvent> Log() const;
  const DatasetManifest& initial_manifest() const { return initial_; }
  const CategoryVocabulary& vocabulary() const { return initial_.vocabulary; }

  // Canonical serialization of the working copy and statuses.
  std::string SnapshotJson() const;

 private:
  struct Entry {
    AnnotatedImage image;
    ReviewStatus status = ReviewStatus::kUnverified;
  };

  // Throws the errors documented on ApplyCorrection.
  void Validate(const Entry& entry, const CorrectionEvent& event) const;
  static void Commit(Entry& entry, const CorrectionEvent& event);
  ImageAnnotations AnnotationsOf(const Entry& entry) const;

  mutable std::shared_mutex mutex_;
  const DatasetManifest initial_;
  std::vector<Entry> entries_;  // initial manifest order
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<CorrectionEvent> log_;
  std::unordered_set<std::string> idempotency_keys_;
  Options options_;
};

// JSON-lines encoding of correction events, as used by the log file.
std::string CorrectionEventToJson(const CorrectionEvent& event,
                                  const CategoryVocabulary& vocabulary);
CorrectionEvent ParseCorrectionEvent(std::string_view document,
                                     const CategoryVocabulary& vocabulary,
                                     const std::string& source = "");

}  // namespace organdet

#endif  // ORGANDET_REVIEW_STORE_H_
