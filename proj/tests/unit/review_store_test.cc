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

#include <atomic>
#include <barrier>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "organdet/errors.h"
#include "organdet/manifest_io.h"
#include "organdet/stats.h"
#include "testing/fixtures.h"
#include "testing/review_events.h"

namespace organdet {
namespace {

ReviewStore::Options FixedClock() {
  ReviewStore::Options options;
  options.clock = [] { return std::string("2026-01-01T00:00:00.000Z"); };
  return options;
}

// Two sheets: "b" with a predicted Leaf and a manual Stem, "a" with a Root.
DatasetManifest SmallManifest() {
  DatasetManifest m;
  m.source = "review";
  AnnotatedImage b;
  b.image_id = "b";
  b.file_path = "b.jpg";
  b.width = 100;
  b.height = 100;
  b.split = Split::kTest;
  b.boxes = {{{10, 10, 50, 50}, 1, Provenance::kPredicted, 0.9},
             {{60, 60, 70, 90}, 5, Provenance::kManual, std::nullopt}};
  AnnotatedImage a;
  a.image_id = "a";
  a.file_path = "a.jpg";
  a.width = 80;
  a.height = 60;
  a.split = Split::kTrain;
  a.boxes = {{{0, 0, 5, 5}, 6, Provenance::kPredicted, 0.6}};
  m.images = {b, a};
  return m;
}

CorrectionEvent Move(const std::string& image, std::size_t index,
                     BoxSnapshot before, BoundingBox to) {
  CorrectionEvent e;
  e.image_id = image;
  e.action = CorrectionAction::kMove;
  e.box_index = index;
  e.before = before;
  e.after = BoxSnapshot{to, before.category_id};
  return e;
}

CorrectionEvent Approve(const std::string& image) {
  CorrectionEvent e;
  e.image_id = image;
  e.action = CorrectionAction::kApprove;
  return e;
}

TEST(CategoryColorTest, FixedPalette) {
  EXPECT_EQ(CategoryColor("Leaf"), (DisplayColor{"blue", "#0000FF"}));
  EXPECT_EQ(CategoryColor("Flower"), (DisplayColor{"maroon", "#800000"}));
  EXPECT_EQ(CategoryColor("Fruit"), (DisplayColor{"magenta", "#FF00FF"}));
  EXPECT_EQ(CategoryColor("Seed"), (DisplayColor{"yellow", "#FFFF00"}));
  EXPECT_EQ(CategoryColor("Stem"), (DisplayColor{"green", "#008000"}));
  EXPECT_EQ(CategoryColor("Root"), (DisplayColor{"gray", "#808080"}));
  EXPECT_EQ(CategoryColor("Bud").name, "black");
}

TEST(ReviewStoreTest, EmptyStoreListsNothing) {
  ReviewStore store(DatasetManifest{});
  const ImagePage page = store.ListImages({});
  EXPECT_TRUE(page.items.empty());
  EXPECT_EQ(page.total, 0u);
  EXPECT_TRUE(store.ExportManifest().images.empty());
}

TEST(ReviewStoreTest, ListIsSortedAndFiltered) {
  ReviewStore store(SmallManifest(), {}, FixedClock());
  ImagePage page = store.ListImages({});
  ASSERT_EQ(page.items.size(), 2u);
  EXPECT_EQ(page.items[0].image_id, "a");
  EXPECT_EQ(page.items[1].image_id, "b");
  EXPECT_EQ(page.items[1].box_counts,
            (std::vector<std::size_t>{1, 0, 0, 0, 1, 0}));
  EXPECT_EQ(page.items[1].box_total, 2u);

  ImageFilter roots;
  roots.category_id = 6;
  page = store.ListImages(roots);
  ASSERT_EQ(page.items.size(), 1u);
  EXPECT_EQ(page.items[0].image_id, "a");

  ImageFilter test_split;
  test_split.split = Split::kTest;
  EXPECT_EQ(store.ListImages(test_split).items[0].image_id, "b");

  store.ApplyCorrection(Approve("a"));
  ImageFilter unverified;
  unverified.status = ReviewStatus::kUnverified;
  page = store.ListImages(unverified);
  ASSERT_EQ(page.items.size(), 1u);
  EXPECT_EQ(page.items[0].image_id, "b");
}

TEST(ReviewStoreTest, Pagination) {
  std::mt19937_64 rng(131);
  ReviewStore store(testing::PredictedManifest(rng, 7, 2));
  const ImagePage second = store.ListImages({}, 1, 3);
  EXPECT_EQ(second.total, 7u);
  ASSERT_EQ(second.items.size(), 3u);
  EXPECT_EQ(second.items[0].image_id, "sheet103");
  EXPECT_EQ(store.ListImages({}, 2, 3).items.size(), 1u);
  EXPECT_TRUE(store.ListImages({}, 5, 3).items.empty());
}

TEST(ReviewStoreTest, CategoryFilterMatchesManifestScan) {
  std::mt19937_64 rng(132);
  const DatasetManifest m = testing::PredictedManifest(rng, 30, 4);
  ReviewStore store(m);
  for (int c = 1; c <= 6; ++c) {
    ImageFilter filter;
    filter.category_id = c;
    std::vector<std::string> expected;
    for (const auto& image : m.images) {
      for (const auto& b : image.boxes) {
        if (b.category_id == c) {
          expected.push_back(image.image_id);
          break;
        }
      }
    }
    std::sort(expected.begin(), expected.end());
    std::vector<std::string> actual;
    for (const auto& s : store.ListImages(filter, 0, 1000).items) {
      actual.push_back(s.image_id);
    }
    EXPECT_EQ(actual, expected) << c;
  }
}

TEST(ReviewStoreTest, AnnotationsCarryColorsAndScores) {
  ReviewStore store(SmallManifest());
  const ImageAnnotations b = store.GetAnnotations("b");
  EXPECT_EQ(b.status, ReviewStatus::kUnverified);
  ASSERT_EQ(b.colors.size(), 2u);
  EXPECT_EQ(b.colors[0].name, "blue");
  EXPECT_EQ(b.colors[1].name, "green");
  EXPECT_EQ(b.image.boxes[0].score, 0.9);
  EXPECT_FALSE(b.image.boxes[1].score.has_value());
  EXPECT_THROW(store.GetAnnotations("zzz"), NotFoundError);
}

TEST(ReviewStoreTest, MoveMarksCorrected) {
  ReviewStore store(SmallManifest(), {}, FixedClock());
  const ImageAnnotations after = store.ApplyCorrection(
      Move("b", 0, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50}));
  EXPECT_EQ(after.status, ReviewStatus::kCorrected);
  EXPECT_EQ(after.image.boxes[0].box, (BoundingBox{12, 10, 50, 50}));
  EXPECT_EQ(after.image.boxes[0].provenance, Provenance::kCorrected);
  EXPECT_FALSE(after.image.boxes[0].score.has_value());
  const auto log = store.Log();
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].sequence, 1u);
  EXPECT_EQ(log[0].timestamp, "2026-01-01T00:00:00.000Z");
  EXPECT_EQ(log[0].after->box, (BoundingBox{12, 10, 50, 50}));
}

TEST(ReviewStoreTest, ApproveTransitions) {
  ReviewStore store(SmallManifest());
  EXPECT_EQ(store.ApplyCorrection(Approve("a")).status,
            ReviewStatus::kVerified);
  EXPECT_EQ(store.ApplyCorrection(
                    Move("a", 0, {{0, 0, 5, 5}, 6}, {1, 1, 5, 5}))
                .status,
            ReviewStatus::kCorrected);
  EXPECT_EQ(store.ApplyCorrection(Approve("a")).status,
            ReviewStatus::kCorrected);
  const StatusCounts counts = store.CountStatuses();
  EXPECT_EQ(counts.unverified, 1u);
  EXPECT_EQ(counts.corrected, 1u);
}

TEST(ReviewStoreTest, AddDeleteRelabel) {
  ReviewStore store(SmallManifest());
  CorrectionEvent add;
  add.image_id = "b";
  add.action = CorrectionAction::kAdd;
  add.after = BoxSnapshot{{0, 0, 100, 100}, 2};
  EXPECT_EQ(store.ApplyCorrection(add).image.boxes.size(), 3u);

  CorrectionEvent relabel;
  relabel.image_id = "b";
  relabel.action = CorrectionAction::kRelabel;
  relabel.box_index = 1;
  relabel.before = BoxSnapshot{{60, 60, 70, 90}, 5};
  relabel.after = BoxSnapshot{{60, 60, 70, 90}, 3};
  EXPECT_EQ(store.ApplyCorrection(relabel).image.boxes[1].category_id, 3);

  CorrectionEvent del;
  del.image_id = "b";
  del.action = CorrectionAction::kDelete;
  del.box_index = 0;
  del.before = BoxSnapshot{{10, 10, 50, 50}, 1};
  const ImageAnnotations out = store.ApplyCorrection(del);
  ASSERT_EQ(out.image.boxes.size(), 2u);
  EXPECT_EQ(out.image.boxes[0].category_id, 3);
  EXPECT_EQ(out.colors[0].name, "magenta");
}

TEST(ReviewStoreTest, RejectsStaleAndInvalidEvents) {
  ReviewStore store(SmallManifest());
  EXPECT_THROW(store.ApplyCorrection(
                   Move("b", 0, {{11, 10, 50, 50}, 1}, {12, 10, 50, 50})),
               ConflictError);
  EXPECT_THROW(store.ApplyCorrection(
                   Move("b", 7, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50})),
               ConflictError);
  EXPECT_THROW(store.ApplyCorrection(
                   Move("b", 0, {{10, 10, 50, 50}, 1}, {12, 10, 150, 50})),
               std::invalid_argument);
  EXPECT_THROW(store.ApplyCorrection(
                   Move("zzz", 0, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50})),
               NotFoundError);
  CorrectionEvent recategorizing_move =
      Move("b", 0, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50});
  recategorizing_move.after->category_id = 2;
  EXPECT_THROW(store.ApplyCorrection(recategorizing_move),
               std::invalid_argument);
  CorrectionEvent approve_with_box = Approve("b");
  approve_with_box.after = BoxSnapshot{{0, 0, 1, 1}, 1};
  EXPECT_THROW(store.ApplyCorrection(approve_with_box), std::invalid_argument);
  EXPECT_TRUE(store.Log().empty());
  EXPECT_EQ(store.CountStatuses().unverified, 2u);
}

TEST(ReviewStoreTest, IdempotencyKeyMakesResubmissionANoOp) {
  ReviewStore store(SmallManifest());
  CorrectionEvent e = Move("b", 0, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50});
  e.idempotency_key = "k1";
  store.ApplyCorrection(e);
  // The snapshot is stale now, but the key short-circuits.
  EXPECT_NO_THROW(store.ApplyCorrection(e));
  EXPECT_EQ(store.Log().size(), 1u);
}

TEST(ReviewStoreTest, ExportContainsReviewedImagesOnly) {
  ReviewStore store(SmallManifest());
  EXPECT_TRUE(store.ExportManifest().images.empty());
  store.ApplyCorrection(Move("b", 0, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50}));
  DatasetManifest out = store.ExportManifest();
  ASSERT_EQ(out.images.size(), 1u);
  EXPECT_EQ(out.images[0].image_id, "b");
  EXPECT_EQ(out.images[0].boxes[0].provenance, Provenance::kCorrected);
  EXPECT_EQ(out.images[0].boxes[1].provenance, Provenance::kVerified);
  EXPECT_TRUE(ValidateManifest(out).empty());

  store.ApplyCorrection(Approve("a"));
  out = store.ExportManifest();
  ASSERT_EQ(out.images.size(), 2u);
  EXPECT_FALSE(out.images[1].boxes[0].score.has_value());
  EXPECT_EQ(store.ExportManifest({ReviewStatus::kVerified}).images.size(), 1u);
}

TEST(ReviewStoreTest, ExportImportStatsMatchService) {
  std::mt19937_64 rng(133);
  ReviewStore store(testing::PredictedManifest(rng, 12, 6));
  for (int i = 0; i < 80; ++i) {
    const auto page = store.ListImages({}, 0, 100);
    const auto& pick = page.items[i % page.items.size()];
    try {
      store.ApplyCorrection(testing::RandomEvent(
          rng, store.GetAnnotations(pick.image_id).image));
    } catch (const std::exception&) {
    }
  }
  const DatasetManifest exported =
      ParseManifestJson(ManifestToJson(store.ExportManifest(
          {ReviewStatus::kUnverified, ReviewStatus::kVerified,
           ReviewStatus::kCorrected})));
  EXPECT_EQ(ComputeStats(exported), store.Stats());
}

TEST(ReviewStorePropertyTest, ReplayReproducesStateAndTransitionsHold) {
  std::mt19937_64 rng(134);
  for (int trial = 0; trial < 40; ++trial) {
    const DatasetManifest initial = testing::PredictedManifest(rng, 4, 5);
    ReviewStore store(initial, {}, FixedClock());
    std::map<std::string, ReviewStatus> status;
    for (const auto& image : initial.images) {
      status[image.image_id] = ReviewStatus::kUnverified;
    }
    for (int step = 0; step < 30; ++step) {
      const auto& image = initial.images[step % initial.images.size()];
      const CorrectionEvent e = testing::RandomEvent(
          rng, store.GetAnnotations(image.image_id).image);
      try {
        const ReviewStatus next = store.ApplyCorrection(e).status;
        EXPECT_TRUE(testing::AllowedTransition(status[e.image_id], next));
        status[e.image_id] = next;
      } catch (const ConflictError&) {
      } catch (const std::invalid_argument&) {
      }
    }
    ReviewStore replayed(initial, store.Log(), FixedClock());
    EXPECT_EQ(replayed.SnapshotJson(), store.SnapshotJson());
    EXPECT_EQ(replayed.Log(), store.Log());
    for (const auto& [id, s] : status) {
      EXPECT_EQ(store.GetAnnotations(id).status, s);
      if (s == ReviewStatus::kCorrected) {
        bool edited = false;
        for (const auto& e : store.Log()) {
          edited |= e.image_id == id && e.action != CorrectionAction::kApprove;
        }
        EXPECT_TRUE(edited);
      }
    }
  }
}

TEST(ReviewStoreTest, EventJsonRoundTrip) {
  const CategoryVocabulary v = CategoryVocabulary::PlantOrgans();
  CorrectionEvent e = Move("b", 0, {{10, 10, 50, 50}, 1}, {12.5, 10, 50, 50});
  e.sequence = 4;
  e.timestamp = "t";
  e.reviewer = "expert";
  e.idempotency_key = "k";
  EXPECT_EQ(ParseCorrectionEvent(CorrectionEventToJson(e, v), v), e);
  const CorrectionEvent approve = Approve("a");
  EXPECT_EQ(ParseCorrectionEvent(CorrectionEventToJson(approve, v), v),
            approve);
  EXPECT_THROW(ParseCorrectionEvent(R"({"action": "fly"})", v), ParseError);
}

TEST(ReviewStoreTest, PersistsAndReplaysLogFile) {
  testing::ScratchDir dir;
  WriteManifestFile(dir / "m.json", SmallManifest());
  const auto log_path = dir / "m.json.events.jsonl";
  std::string snapshot;
  {
    auto store = ReviewStore::Open(dir / "m.json", log_path, FixedClock());
    store->ApplyCorrection(
        Move("b", 0, {{10, 10, 50, 50}, 1}, {12, 10, 50, 50}));
    store->ApplyCorrection(Approve("a"));
    snapshot = store->SnapshotJson();
  }
  auto reopened = ReviewStore::Open(dir / "m.json", log_path, FixedClock());
  EXPECT_EQ(reopened->SnapshotJson(), snapshot);
  EXPECT_EQ(reopened->Log().size(), 2u);
  reopened->ApplyCorrection(
      Move("b", 0, {{12, 10, 50, 50}, 1}, {13, 10, 50, 50}));
  EXPECT_EQ(reopened->Log().back().sequence, 3u);

  std::ofstream(log_path, std::ios::app) << "{broken\n";
  EXPECT_THROW(ReviewStore::Open(dir / "m.json", log_path), ParseError);
}

TEST(ReviewStoreConcurrencyTest, ConflictingMovesOneWins) {
  for (int round = 0; round < 50; ++round) {
    ReviewStore store(SmallManifest());
    std::atomic<int> ok{0};
    std::atomic<int> conflicts{0};
    std::barrier start(2);
    auto worker = [&](double x) {
      start.arrive_and_wait();
      try {
        store.ApplyCorrection(
            Move("b", 0, {{10, 10, 50, 50}, 1}, {x, 10, 50, 50}));
        ++ok;
      } catch (const ConflictError&) {
        ++conflicts;
      }
    };
    std::thread t1(worker, 12.0);
    std::thread t2(worker, 14.0);
    t1.join();
    t2.join();
    EXPECT_EQ(ok.load(), 1);
    EXPECT_EQ(conflicts.load(), 1);
    EXPECT_EQ(store.Log().size(), 1u);
  }
}

TEST(ReviewStoreConcurrencyTest, ReadersSeeWholeBoxLists) {
  std::mt19937_64 rng(135);
  ReviewStore store(testing::PredictedManifest(rng, 1, 0));
  std::atomic<bool> done{false};
  std::thread writer([&] {
    for (int i = 0; i < 300; ++i) {
      CorrectionEvent add;
      add.image_id = "sheet100";
      add.action = CorrectionAction::kAdd;
      add.after = BoxSnapshot{{0, 0, 1, 1}, 1};
      store.ApplyCorrection(add);
    }
    done = true;
  });
  std::size_t last = 0;
  while (!done) {
    const ImageAnnotations a = store.GetAnnotations("sheet100");
    EXPECT_EQ(a.colors.size(), a.image.boxes.size());
    EXPECT_GE(a.image.boxes.size(), last);
    last = a.image.boxes.size();
    const auto summary = store.ListImages({}).items.at(0);
    EXPECT_EQ(summary.box_counts[0], summary.box_total);
  }
  writer.join();
  EXPECT_EQ(store.GetAnnotations("sheet100").image.boxes.size(), 300u);
}

}  // namespace
}  // namespace organdet
