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
#include "organdet/cli.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gtest/gtest.h"
#include "organdet/coco_json.h"
#include "organdet/dataset.h"
#include "organdet/manifest_io.h"
#include "organdet/report.h"
#include "testing/cli_runner.h"
#include "testing/crafted.h"
#include "testing/fixtures.h"
#include "testing/herbarium_corpus.h"

namespace organdet {
namespace {

using nlohmann::json;
using testing::CliResult;
using testing::RunCli;
using testing::ScratchDir;
using testing::SyntheticSheet;

SyntheticSheet Sheet(std::string id, std::vector<SyntheticSheet::Box> boxes) {
  SyntheticSheet s;
  s.image_id = std::move(id);
  s.boxes = std::move(boxes);
  return s;
}

void WriteXml(const std::filesystem::path& path, const SyntheticSheet& s) {
  std::ofstream(path) << testing::SheetToVocXml(s);
}

std::string Path(const std::filesystem::path& p) { return p.string(); }

class CliConvertTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::filesystem::create_directories(dir_ / "xml");
    WriteXml(dir_ / "xml" / "b.xml",
             Sheet("b", {{"Leaf", 10, 10, 20, 20}, {"Root", 0, 0, 5, 5}}));
    WriteXml(dir_ / "xml" / "a.xml", Sheet("a", {{"Flower", 1, 2, 3, 4}}));
    WriteXml(dir_ / "xml" / "c.xml", Sheet("c", {}));
    std::ofstream(dir_ / "xml" / "notes.txt") << "ignored";
    std::ofstream(dir_ / "splits.txt") << "a train\nb test\n\nc train\n";
  }

  ScratchDir dir_;
};

TEST_F(CliConvertTest, XmlDirectoryToManifest) {
  const CliResult r = RunCli({"convert", Path(dir_ / "xml"), "--split-list",
                              Path(dir_ / "splits.txt")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.err, "converted 3 images with 3 boxes\n");
  const DatasetManifest m = ParseManifestJson(r.out, "stdout");
  ASSERT_EQ(m.images.size(), 3u);
  EXPECT_EQ(m.images[0].image_id, "a");
  EXPECT_EQ(m.images[1].image_id, "b");
  EXPECT_EQ(m.images[2].image_id, "c");
  EXPECT_EQ(m.images[0].split, Split::kTrain);
  EXPECT_EQ(m.images[1].split, Split::kTest);
  EXPECT_EQ(m.images[1].boxes[1].category_id, 6);
  EXPECT_EQ(m.images[1].boxes[1].provenance, Provenance::kManual);
}

TEST_F(CliConvertTest, DefaultSplitAppliesToAllFiles) {
  const CliResult r =
      RunCli({"convert", Path(dir_ / "xml"), "--split", "test"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const auto& image : ParseManifestJson(r.out, "stdout").images) {
    EXPECT_EQ(image.split, Split::kTest);
  }
}

TEST_F(CliConvertTest, CocoRoundTripThroughFiles) {
  const auto coco = dir_ / "out.coco.json";
  const auto manifest = dir_ / "out.manifest.json";
  ASSERT_EQ(RunCli({"convert", Path(dir_ / "xml"), "--split-list",
                    Path(dir_ / "splits.txt"), "--to", "coco", "-o",
                    Path(coco)})
                .exit_code,
            0);
  const DatasetManifest from_coco =
      ReadCocoJson(ReadFileToString(coco), Path(coco));
  EXPECT_EQ(from_coco.box_count(), 3u);

  const CliResult back = RunCli(
      {"convert", Path(coco), "--from", "coco", "-o", Path(manifest)});
  ASSERT_EQ(back.exit_code, 0) << back.err;
  EXPECT_TRUE(back.out.empty());
  const DatasetManifest m = ReadManifestFile(manifest);
  ASSERT_EQ(m.images.size(), 3u);
  EXPECT_EQ(m.images[1].boxes[0].box, (BoundingBox{10, 10, 20, 20}));
  EXPECT_EQ(m.images[1].split, Split::kTest);
}

TEST_F(CliConvertTest, MalformedXmlNamesTheFile) {
  std::ofstream(dir_ / "xml" / "broken.xml") << "<annotation><size>";
  const CliResult r = RunCli({"convert", Path(dir_ / "xml")});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("broken.xml"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliConvertTest, UnknownCategoryNeedsOptIn) {
  WriteXml(dir_ / "xml" / "d.xml", Sheet("d", {{"Blatt", 1, 1, 9, 9}}));
  const CliResult rejected = RunCli({"convert", Path(dir_ / "xml")});
  EXPECT_EQ(rejected.exit_code, 1);
  EXPECT_NE(rejected.err.find("Blatt"), std::string::npos);
  EXPECT_NE(rejected.err.find("d.xml"), std::string::npos);

  const CliResult accepted =
      RunCli({"convert", Path(dir_ / "xml"), "--allow-new-categories"});
  ASSERT_EQ(accepted.exit_code, 0) << accepted.err;
  const DatasetManifest m = ParseManifestJson(accepted.out, "stdout");
  EXPECT_EQ(m.vocabulary.size(), 7);
  EXPECT_EQ(m.vocabulary.Name(7), "Blatt");
}

TEST_F(CliConvertTest, MissingInputAndBadSplitList) {
  EXPECT_EQ(RunCli({"convert", Path(dir_ / "nope")}).exit_code, 1);
  std::ofstream(dir_ / "bad_splits.txt") << "a validation\n";
  const CliResult r = RunCli({"convert", Path(dir_ / "xml"), "--split-list",
                              Path(dir_ / "bad_splits.txt")});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("bad_splits.txt:1"), std::string::npos) << r.err;
}

class CliManifestTest : public ::testing::Test {
 protected:
  std::string Write(const std::string& name, const DatasetManifest& m) {
    const auto path = dir_ / name;
    WriteManifestFile(path, m);
    return Path(path);
  }

  ScratchDir dir_;
};

TEST_F(CliManifestTest, StatsTableAndJson) {
  const std::string path =
      Write("gt.json", testing::CraftedGroundTruthManifest());
  const CliResult table = RunCli({"stats", path});
  ASSERT_EQ(table.exit_code, 0) << table.err;
  EXPECT_NE(table.out.find("Leaf"), std::string::npos);
  EXPECT_NE(table.out.find("Mean boxes per image: 2.0"), std::string::npos);

  const CliResult doc = RunCli({"stats", path, "--json", "-"});
  ASSERT_EQ(doc.exit_code, 0);
  const json stats = json::parse(doc.out);
  EXPECT_EQ(stats["totals"]["test"], 2);
  EXPECT_EQ(stats["categories"][0]["name"], "Leaf");

  const auto json_path = dir_ / "stats.json";
  ASSERT_EQ(RunCli({"stats", path, "--json", Path(json_path)}).exit_code, 0);
  EXPECT_EQ(ReadFileToString(json_path), doc.out);
}

TEST_F(CliManifestTest, RescaleFitsTheCanvas) {
  DatasetManifest m;
  AnnotatedImage image;
  image.image_id = "sheet";
  image.width = 5100;
  image.height = 3500;
  image.boxes.push_back({{0, 0, 350, 175}, 1, Provenance::kManual, {}});
  m.images.push_back(image);
  const CliResult r = RunCli({"rescale", Write("big.json", m)});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const DatasetManifest out = ParseManifestJson(r.out, "stdout");
  EXPECT_EQ(out.images[0].width, 1165);
  EXPECT_EQ(out.images[0].height, 800);
  EXPECT_DOUBLE_EQ(out.images[0].scale, 800.0 / 3500.0);
  EXPECT_DOUBLE_EQ(out.images[0].boxes[0].box.x_max, 80.0);
  EXPECT_DOUBLE_EQ(out.images[0].boxes[0].box.y_max, 40.0);

  EXPECT_EQ(RunCli({"rescale", Write("big2.json", m), "--width", "0"})
                .exit_code,
            2);
}

DatasetManifest OverlappingPredictions() {
  DatasetManifest m = testing::CraftedPredictionManifest();
  auto& boxes = m.images[0].boxes;
  boxes.clear();
  boxes.push_back({{0, 0, 10, 10}, 1, Provenance::kPredicted, 0.9});
  boxes.push_back({{1, 0, 11, 10}, 1, Provenance::kPredicted, 0.8});
  boxes.push_back({{1, 1, 11, 11}, 2, Provenance::kPredicted, 0.7});
  boxes.push_back({{50, 50, 60, 60}, 2, Provenance::kPredicted, 0.3});
  return m;
}

TEST_F(CliManifestTest, NmsClassAgnosticAndPerCategory) {
  const std::string path = Write("preds.json", OverlappingPredictions());
  const CliResult agnostic = RunCli({"nms", path});
  ASSERT_EQ(agnostic.exit_code, 0) << agnostic.err;
  EXPECT_EQ(agnostic.err, "kept 2 of 4 boxes, suppressed 2\n");
  const DatasetManifest kept = ParseManifestJson(agnostic.out, "stdout");
  ASSERT_EQ(kept.images[0].boxes.size(), 2u);
  EXPECT_EQ(kept.images[0].boxes[0].score, 0.9);
  EXPECT_EQ(kept.images[0].boxes[1].score, 0.3);

  const CliResult per_category = RunCli({"nms", path, "--per-category"});
  EXPECT_EQ(per_category.err, "kept 3 of 4 boxes, suppressed 1\n");

  const CliResult top = RunCli({"nms", path, "--per-category", "--top-n", "1"});
  EXPECT_EQ(top.err, "kept 1 of 4 boxes, suppressed 3\n");

  EXPECT_EQ(RunCli({"nms", path, "--threshold", "1.5"}).exit_code, 2);
}

TEST_F(CliManifestTest, FilterByScore) {
  const std::string path = Write("preds.json", OverlappingPredictions());
  const CliResult r = RunCli({"filter", path, "--score-threshold", "0.75"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(ParseManifestJson(r.out, "stdout").box_count(), 2u);
  EXPECT_EQ(r.err, "kept 2 of 4 boxes with score >= 0.75\n");
}

TEST(CliAnchorsTest, SingleLevelExample) {
  const CliResult r = RunCli(
      {"anchors", "--scales", "32", "--strides", "16", "--grid", "2x3"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("18 anchors over 1 level\n"), std::string::npos);
  const CliResult doc = RunCli({"anchors", "--scales", "32", "--strides", "16",
                                "--grid", "2x3", "--json"});
  const json anchors = json::parse(doc.out);
  ASSERT_EQ(anchors["count"], 18);
  EXPECT_EQ(anchors["anchors"][0]["center"], json::array({8.0, 8.0}));
  EXPECT_EQ(anchors["anchors"][1]["size"], json::array({32.0, 32.0}));
}

TEST(CliAnchorsTest, DefaultPyramid) {
  const CliResult one = RunCli({"anchors", "--json"});
  ASSERT_EQ(one.exit_code, 0) << one.err;
  EXPECT_EQ(json::parse(one.out)["count"], 18);

  const CliResult grid = RunCli({"anchors", "--grid", "2x3", "--json"});
  EXPECT_EQ(json::parse(grid.out)["count"], 108);

  const CliResult image = RunCli({"anchors", "--image", "1165x800"});
  EXPECT_NE(image.out.find("anchors over 6 levels"), std::string::npos);
}

TEST(CliAnchorsTest, RejectsBadConfigurations) {
  EXPECT_EQ(RunCli({"anchors", "--grid", "2by3"}).exit_code, 1);
  EXPECT_EQ(RunCli({"anchors", "--grid", "2x3,4x5"}).exit_code, 1);
  EXPECT_EQ(RunCli({"anchors", "--scales", "32,64", "--strides", "16"})
                .exit_code,
            1);
  EXPECT_EQ(RunCli({"anchors", "--ratios", "0"}).exit_code, 1);
  EXPECT_EQ(RunCli({"anchors", "--grid", "2x3", "--image", "10x10"}).exit_code,
            2);
}

class CliEvaluateTest : public CliManifestTest {
 protected:
  void SetUp() override {
    gt_ = Write("gt.json", testing::CraftedGroundTruthManifest());
    preds_ = Write("preds.json", testing::CraftedPredictionManifest());
  }

  std::string gt_;
  std::string preds_;
};

TEST_F(CliEvaluateTest, CraftedReportMatchesGolden) {
  const CliResult r = RunCli({"evaluate", gt_, preds_});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, ReadFileToString(std::filesystem::path(ORGANDET_GOLDEN_DIR) /
                                    "crafted_report.txt"));
}

TEST_F(CliEvaluateTest, SelfEvaluationIsPerfect) {
  DatasetManifest self = testing::CraftedGroundTruthManifest();
  for (AnnotatedBox& b : self.images[0].boxes) {
    b.provenance = Provenance::kPredicted;
    b.score = 1.0;
  }
  const CliResult r = RunCli({"evaluate", gt_, Write("self.json", self)});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("1.0000 |       100.0 | 100.0 | 100.0"),
            std::string::npos)
      << r.out;
}

TEST_F(CliEvaluateTest, EmptyPredictionsListEveryCategory) {
  DatasetManifest empty = testing::CraftedGroundTruthManifest();
  empty.images[0].boxes.clear();
  const CliResult r = RunCli({"evaluate", gt_, Write("empty.json", empty)});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const char* name : {"Leaf", "Flower", "Fruit", "Seed", "Stem", "Root"}) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
  EXPECT_NE(r.out.find("Leaf     |              2 | 0.0"), std::string::npos)
      << r.out;
}

TEST_F(CliEvaluateTest, MethodsAndJson) {
  const CliResult voc = RunCli({"evaluate", gt_, preds_, "--method", "voc"});
  EXPECT_EQ(voc.out.find("COCO"), std::string::npos);
  EXPECT_NE(voc.out.find("0.8333"), std::string::npos);

  const auto path = dir_ / "report.json";
  const CliResult both =
      RunCli({"evaluate", gt_, preds_, "--json", Path(path)});
  ASSERT_EQ(both.exit_code, 0);
  const EvalReport report =
      ParseEvalReportJson(ReadFileToString(path), Path(path));
  EXPECT_EQ(FormatEvalReport(report, ReportMethod::kBoth), both.out);

  const CliResult doc = RunCli({"evaluate", gt_, preds_, "--json", "-"});
  EXPECT_EQ(doc.out, ReadFileToString(path));
}

TEST_F(CliEvaluateTest, ScoreThresholdDropsDetections) {
  const CliResult r =
      RunCli({"evaluate", gt_, preds_, "--score-threshold", "0.75"});
  ASSERT_EQ(r.exit_code, 0);
  // One TP (0.9) survives the cut, the FP (0.8) ranks after it.
  EXPECT_NE(r.out.find("0.5000"), std::string::npos) << r.out;
}

TEST_F(CliEvaluateTest, VocabularyMismatchFails) {
  DatasetManifest other = testing::CraftedPredictionManifest();
  other.vocabulary = CategoryVocabulary({"Twig"});
  const CliResult r = RunCli({"evaluate", gt_, Write("other.json", other)});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("vocabulary mismatch"), std::string::npos) << r.err;
}

TEST(CliUsageTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli({}).exit_code, 2);
  EXPECT_EQ(RunCli({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(RunCli({"stats"}).exit_code, 2);
  EXPECT_EQ(RunCli({"evaluate", "a", "b", "--method", "f1"}).exit_code, 2);
  EXPECT_EQ(RunCli({"serve"}).exit_code, 2);
  const CliResult help = RunCli({"--help"});
  EXPECT_EQ(help.exit_code, 0);
  EXPECT_NE(help.out.find("evaluate"), std::string::npos);
}

TEST(CliUsageTest, MissingFilesExitOne) {
  const CliResult r = RunCli({"stats", "/nonexistent/gt.json"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("/nonexistent/gt.json"), std::string::npos);
  EXPECT_EQ(RunCli({"serve", "--manifest", "/nonexistent/m.json"}).exit_code,
            1);
}

}  // namespace
}  // namespace organdet
