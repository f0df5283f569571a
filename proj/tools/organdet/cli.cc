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
#include "cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "organdet/anchors.h"
#include "organdet/coco_json.h"
#include "organdet/dataset.h"
#include "organdet/errors.h"
#include "organdet/eval.h"
#include "organdet/manifest_io.h"
#include "organdet/nms.h"
#include "organdet/report.h"
#include "organdet/review_server.h"
#include "organdet/review_store.h"
#include "organdet/stats.h"
#include "organdet/voc_xml.h"

namespace organdet::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kImagesRootEnv[] = "ORGANDET_IMAGES_ROOT";

// Operational failure reported as "organdet: <message>".
class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Emit(const std::string& path, const std::string& text,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteFileAtomically(path, text);
  }
}

std::string Plural(std::size_t n, const char* one, const char* many) {
  return fmt::format("{} {}", n, n == 1 ? one : many);
}

// ---------------------------------------------------------------- convert

struct ConvertOptions {
  std::string input;
  std::string from = "voc-xml";
  std::string to = "manifest";
  std::string output;
  std::string split = "unassigned";
  std::string split_list;
  std::string source;
  bool allow_new_categories = false;
};

std::map<std::string, Split> ReadSplitList(const std::string& path) {
  std::istringstream in(ReadFileToString(path));
  std::map<std::string, Split> splits;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string id, split_name, extra;
    if (!(fields >> id)) continue;
    if (id[0] == '#') continue;
    if (!(fields >> split_name) || (fields >> extra)) {
      throw ParseError(fmt::format("{}:{}", path, number),
                       "expected '<image_id> <train|test|unassigned>'");
    }
    const auto split = ParseSplit(split_name);
    if (!split) {
      throw ParseError(fmt::format("{}:{}", path, number),
                       "unknown split '" + split_name + "'");
    }
    splits[id] = *split;
  }
  return splits;
}

std::vector<fs::path> XmlFiles(const fs::path& input) {
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int RunConvert(const ConvertOptions& o, std::ostream& out, std::ostream& err) {
  if (!fs::exists(o.input)) {
    throw CommandError("input '" + o.input + "' does not exist");
  }
  DatasetManifest manifest;
  if (o.from == "voc-xml") {
    VocParseOptions parse;
    parse.allow_new_categories = o.allow_new_categories;
    parse.split = *ParseSplit(o.split);
    const auto files = XmlFiles(o.input);
    for (const fs::path& file : files) {
      manifest.images.push_back(
          ReadVocXmlFile(file, manifest.vocabulary, parse));
    }
    manifest.source = o.source.empty() ? fs::path(o.input).filename().string()
                                       : o.source;
  } else if (o.from == "coco") {
    manifest = ReadCocoJson(ReadFileToString(o.input), o.input);
  } else {
    manifest = ReadManifestFile(o.input);
  }
  if (!o.source.empty()) manifest.source = o.source;

  if (!o.split_list.empty()) {
    const auto splits = ReadSplitList(o.split_list);
    std::size_t assigned = 0;
    for (AnnotatedImage& image : manifest.images) {
      auto it = splits.find(image.image_id);
      if (it == splits.end()) continue;
      image.split = it->second;
      ++assigned;
    }
    if (assigned < splits.size()) {
      err << fmt::format("organdet: warning: {} of {} split entries name "
                         "unknown images\n",
                         splits.size() - assigned, splits.size());
    }
  }
  const auto problems = ValidateManifest(manifest);
  if (!problems.empty()) throw CommandError(problems.front());

  Emit(o.output,
       SerializeAnnotations(manifest, o.to == "coco"
                                          ? AnnotationFormat::kCoco
                                          : AnnotationFormat::kManifest),
       out);
  err << fmt::format("converted {} with {}\n",
                     Plural(manifest.images.size(), "image", "images"),
                     Plural(manifest.box_count(), "box", "boxes"));
  return kExitOk;
}

// ------------------------------------------------------------------ stats

struct StatsOptions {
  std::string input;
  std::string json;
};

int RunStats(const StatsOptions& o, std::ostream& out, std::ostream&) {
  const DatasetStats stats = ComputeStats(ReadAnnotationFile(o.input).manifest);
  if (o.json == "-") {
    out << StatsToJson(stats);
    return kExitOk;
  }
  out << FormatStatsTable(stats);
  if (!o.json.empty()) WriteFileAtomically(o.json, StatsToJson(stats));
  return kExitOk;
}

// ---------------------------------------------------------------- rescale

struct RescaleOptions {
  std::string input;
  std::string output;
  int width = 1200;
  int height = 800;
};

int RunRescale(const RescaleOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedAnnotations in = ReadAnnotationFile(o.input);
  const DatasetManifest rescaled =
      RescaleManifest(in.manifest, o.width, o.height);
  Emit(o.output, SerializeAnnotations(rescaled, in.format), out);
  err << fmt::format("rescaled {} to fit {}x{}\n",
                     Plural(rescaled.images.size(), "image", "images"),
                     o.width, o.height);
  return kExitOk;
}

// -------------------------------------------------------------------- nms

struct NmsOptions {
  std::string input;
  std::string output;
  double threshold = ProposalConfig::Testing().nms_threshold;
  bool per_category = false;
  std::optional<std::size_t> top_n;
};

int RunNms(const NmsOptions& o, std::ostream& out, std::ostream& err) {
  LoadedAnnotations in = ReadAnnotationFile(o.input);
  std::size_t before = 0;
  std::size_t after = 0;
  for (AnnotatedImage& image : in.manifest.images) {
    std::vector<BoundingBox> boxes;
    std::vector<double> scores;
    std::vector<int> categories;
    for (const AnnotatedBox& b : image.boxes) {
      boxes.push_back(b.box);
      scores.push_back(b.score.value_or(1.0));
      categories.push_back(b.category_id);
    }
    std::vector<std::size_t> keep =
        o.per_category
            ? NonMaxSuppression(boxes, scores, o.threshold,
                                std::span<const int>(categories))
            : NonMaxSuppression(boxes, scores, o.threshold);
    if (o.top_n && keep.size() > *o.top_n) keep.resize(*o.top_n);
    std::vector<AnnotatedBox> kept;
    for (std::size_t k : keep) kept.push_back(image.boxes[k]);
    before += image.boxes.size();
    after += kept.size();
    image.boxes = std::move(kept);
  }
  Emit(o.output, SerializeAnnotations(in.manifest, in.format), out);
  err << fmt::format("kept {} of {} boxes, suppressed {}\n", after, before,
                     before - after);
  return kExitOk;
}

// ----------------------------------------------------------------- filter

struct FilterOptions {
  std::string input;
  std::string output;
  double score_threshold = 0.5;
};

int RunFilter(const FilterOptions& o, std::ostream& out, std::ostream& err) {
  LoadedAnnotations in = ReadAnnotationFile(o.input);
  std::size_t before = 0;
  std::size_t after = 0;
  for (AnnotatedImage& image : in.manifest.images) {
    before += image.boxes.size();
    std::erase_if(image.boxes, [&](const AnnotatedBox& b) {
      return b.score && *b.score < o.score_threshold;
    });
    after += image.boxes.size();
  }
  Emit(o.output, SerializeAnnotations(in.manifest, in.format), out);
  err << fmt::format("kept {} of {} boxes with score >= {}\n", after, before,
                     o.score_threshold);
  return kExitOk;
}

// ---------------------------------------------------------------- anchors

struct AnchorsOptions {
  AnchorConfig config;
  std::vector<std::string> grid;
  std::string image;
  bool json = false;
};

std::pair<int, int> ParseDims(const std::string& text, const char* what) {
  const auto x = text.find('x');
  int a = 0, b = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_a = 0, used_b = 0;
    a = std::stoi(text.substr(0, x), &used_a);
    b = std::stoi(text.substr(x + 1), &used_b);
    if (used_a != x || used_b != text.size() - x - 1) {
      throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw CommandError(fmt::format("{} must look like AxB, got '{}'", what,
                                   text));
  }
  if (a <= 0 || b <= 0) {
    throw CommandError(fmt::format("{} must be positive, got '{}'", what,
                                   text));
  }
  return {a, b};
}

int RunAnchors(const AnchorsOptions& o, std::ostream& out, std::ostream&) {
  try {
    o.config.Validate();
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }
  const std::size_t levels = o.config.strides.size();
  std::vector<GridSize> grids;
  if (!o.image.empty()) {
    const auto [w, h] = ParseDims(o.image, "--image");
    grids = GridSizesForImage(o.config, w, h);
  } else {
    const std::vector<std::string> spec =
        o.grid.empty() ? std::vector<std::string>{"1x1"} : o.grid;
    if (spec.size() != 1 && spec.size() != levels) {
      throw CommandError(fmt::format(
          "--grid takes one HxW for all levels or one per level ({})",
          levels));
    }
    for (std::size_t l = 0; l < levels; ++l) {
      const auto [h, w] = ParseDims(spec.size() == 1 ? spec[0] : spec[l],
                                    "--grid");
      grids.push_back({h, w});
    }
  }
  const std::vector<Anchor> anchors = GenerateAnchors(o.config, grids);
  const std::size_t ratios = o.config.ratios.size();

  // Cell centers straight from the grid; box midpoints carry rounding.
  std::vector<std::pair<double, double>> centers;
  centers.reserve(anchors.size());
  for (std::size_t l = 0; l < levels; ++l) {
    const double stride = o.config.strides[l];
    for (int i = 0; i < grids[l].height; ++i) {
      for (int j = 0; j < grids[l].width; ++j) {
        centers.insert(centers.end(), ratios,
                       {(j + o.config.center_offset) * stride,
                        (i + o.config.center_offset) * stride});
      }
    }
  }

  if (o.json) {
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const Anchor& a = anchors[i];
      list.push_back({{"level", a.level},
                      {"stride", o.config.strides[a.level]},
                      {"scale", o.config.scales[a.level]},
                      {"ratio", o.config.ratios[i % ratios]},
                      {"center", {centers[i].first, centers[i].second}},
                      {"size", {a.box.width(), a.box.height()}},
                      {"bbox", {a.box.x_min, a.box.y_min, a.box.x_max,
                                a.box.y_max}}});
    }
    out << nlohmann::json{{"version", 1},
                          {"count", anchors.size()},
                          {"anchors", std::move(list)}}
               .dump(2)
        << "\n";
    return kExitOk;
  }

  out << fmt::format("{:>5} {:>6} {:>7} {:>5} {:>10} {:>10} {:>10} {:>10}\n",
                     "level", "stride", "scale", "ratio", "center_x",
                     "center_y", "width", "height");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Anchor& a = anchors[i];
    out << fmt::format(
        "{:>5} {:>6} {:>7} {:>5} {:>10.3f} {:>10.3f} {:>10.3f} {:>10.3f}\n",
        a.level, o.config.strides[a.level], o.config.scales[a.level],
        o.config.ratios[i % ratios], centers[i].first, centers[i].second,
        a.box.width(), a.box.height());
  }
  out << fmt::format("{} over {}\n",
                     Plural(anchors.size(), "anchor", "anchors"),
                     Plural(levels, "level", "levels"));
  return kExitOk;
}

// --------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string ground_truth;
  std::string predictions;
  double score_threshold = 0.5;
  std::string method = "both";
  std::string json;
};

int RunEvaluate(const EvaluateOptions& o, std::ostream& out, std::ostream&) {
  const DatasetManifest gt = ReadAnnotationFile(o.ground_truth).manifest;
  const DatasetManifest preds = ReadAnnotationFile(o.predictions).manifest;
  std::vector<Detection> detections;
  try {
    detections = DetectionsFromManifest(preds, gt.vocabulary);
  } catch (const std::invalid_argument& e) {
    throw CommandError(std::string("vocabulary mismatch: ") + e.what());
  }
  const EvalReport report =
      Evaluate(detections, GroundTruthFromManifest(gt), gt.vocabulary,
               o.score_threshold);
  if (o.json == "-") {
    out << EvalReportToJson(report);
    return kExitOk;
  }
  out << FormatEvalReport(report, *ParseReportMethod(o.method));
  if (!o.json.empty()) WriteFileAtomically(o.json, EvalReportToJson(report));
  return kExitOk;
}

// ------------------------------------------------------------------ serve

struct ServeOptions {
  std::string manifest;
  std::string log;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string images_root;
};

std::atomic<bool> g_stop_requested{false};

extern "C" void HandleStopSignal(int) { g_stop_requested = true; }

int RunServe(const ServeOptions& o, std::ostream&, std::ostream& err) {
  if (!fs::exists(o.manifest)) {
    throw CommandError("manifest '" + o.manifest + "' does not exist");
  }
  const std::string log =
      o.log.empty() ? o.manifest + ".events.jsonl" : o.log;
  std::unique_ptr<ReviewStore> store = ReviewStore::Open(o.manifest, log);

  ReviewServerOptions server_options;
  server_options.host = o.host;
  server_options.port = o.port;
  if (!o.images_root.empty()) {
    server_options.images_root = o.images_root;
  } else if (const char* env = std::getenv(kImagesRootEnv);
             env != nullptr && *env != '\0') {
    server_options.images_root = env;
  } else {
    server_options.images_root = fs::absolute(o.manifest).parent_path();
  }

  ReviewServer server(*store, server_options);
  int port = 0;
  try {
    port = server.Bind();
  } catch (const std::runtime_error& e) {
    throw CommandError(e.what());
  }

  g_stop_requested = false;
  auto previous_int = std::signal(SIGINT, HandleStopSignal);
  auto previous_term = std::signal(SIGTERM, HandleStopSignal);
  std::atomic<bool> finished{false};
  std::thread watcher([&] {
    while (!finished) {
      if (g_stop_requested) {
        server.Stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  err << fmt::format("serving {} on http://{}:{}\n", o.manifest, o.host, port)
      << std::flush;
  server.Listen();
  finished = true;
  watcher.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  err << "stopped\n";
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Plant-organ detection tooling", "organdet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "organdet 0.1.0");

  ConvertOptions convert;
  auto* convert_cmd = app.add_subcommand(
      "convert", "Convert annotation XML, COCO JSON or manifests");
  convert_cmd->add_option("input", convert.input,
                          "XML file, directory of XML files, or JSON file")
      ->required();
  convert_cmd->add_option("--from", convert.from, "Input format")
      ->check(CLI::IsMember({"voc-xml", "coco", "manifest"}))
      ->capture_default_str();
  convert_cmd->add_option("--to", convert.to, "Output format")
      ->check(CLI::IsMember({"coco", "manifest"}))
      ->capture_default_str();
  convert_cmd->add_option("-o,--output", convert.output,
                          "Output file (default: standard output)");
  convert_cmd->add_option("--split", convert.split,
                          "Split for images read from XML")
      ->check(CLI::IsMember({"train", "test", "unassigned"}))
      ->capture_default_str();
  convert_cmd->add_option("--split-list", convert.split_list,
                          "File of '<image_id> <split>' lines");
  convert_cmd->add_option("--source", convert.source,
                          "Source description stored in the manifest");
  convert_cmd->add_flag("--allow-new-categories",
                        convert.allow_new_categories,
                        "Extend the vocabulary with unknown object names");

  StatsOptions stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "Box counts per organ and split");
  stats_cmd->add_option("input", stats.input, "Manifest or COCO file")
      ->required();
  stats_cmd->add_option("--json", stats.json,
                        "Also write the statistics document ('-': only it, "
                        "to standard output)");

  RescaleOptions rescale;
  auto* rescale_cmd = app.add_subcommand(
      "rescale", "Fit every image inside a target canvas");
  rescale_cmd->add_option("input", rescale.input, "Manifest or COCO file")
      ->required();
  rescale_cmd->add_option("-o,--output", rescale.output, "Output file");
  rescale_cmd->add_option("--width", rescale.width, "Target width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rescale_cmd->add_option("--height", rescale.height, "Target height")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  NmsOptions nms;
  auto* nms_cmd = app.add_subcommand(
      "nms", "Greedy non-maximum suppression per image");
  nms_cmd->add_option("input", nms.input, "Prediction file")->required();
  nms_cmd->add_option("-o,--output", nms.output, "Output file");
  nms_cmd->add_option("--threshold", nms.threshold,
                      "Suppress boxes overlapping a kept box above this IoU")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  nms_cmd->add_flag("--per-category", nms.per_category,
                    "Only suppress within a category");
  nms_cmd->add_option("--top-n", nms.top_n, "Keep at most N boxes per image")
      ->check(CLI::PositiveNumber);

  FilterOptions filter;
  auto* filter_cmd = app.add_subcommand(
      "filter", "Drop predictions scoring below a threshold");
  filter_cmd->add_option("input", filter.input, "Prediction file")
      ->required();
  filter_cmd->add_option("-o,--output", filter.output, "Output file");
  filter_cmd->add_option("--score-threshold", filter.score_threshold,
                         "Minimum score kept")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  AnchorsOptions anchors;
  auto* anchors_cmd =
      app.add_subcommand("anchors", "List the anchors of a feature pyramid");
  anchors_cmd->add_option("--scales", anchors.config.scales,
                          "Anchor scale per level (square root of area)")
      ->delimiter(',')
      ->capture_default_str();
  anchors_cmd->add_option("--ratios", anchors.config.ratios,
                          "Aspect ratios as width/height")
      ->delimiter(',')
      ->capture_default_str();
  anchors_cmd->add_option("--strides", anchors.config.strides,
                          "Stride per level in pixels")
      ->delimiter(',')
      ->capture_default_str();
  anchors_cmd->add_option("--center-offset", anchors.config.center_offset,
                          "Anchor center within its cell")
      ->capture_default_str();
  auto* grid_option = anchors_cmd->add_option(
      "--grid", anchors.grid,
      "Feature grid HxW, once for all levels or once per level")
      ->delimiter(',');
  anchors_cmd->add_option("--image", anchors.image,
                          "Derive grids from an image size WxH")
      ->excludes(grid_option);
  anchors_cmd->add_flag("--json", anchors.json, "Print a JSON document");

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Pascal VOC and COCO average precision");
  evaluate_cmd->add_option("ground_truth", evaluate.ground_truth,
                           "Ground-truth manifest or COCO file")
      ->required();
  evaluate_cmd->add_option("predictions", evaluate.predictions,
                           "Prediction manifest or COCO file")
      ->required();
  evaluate_cmd->add_option("--score-threshold", evaluate.score_threshold,
                           "Discard detections scoring below this")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  evaluate_cmd->add_option("--method", evaluate.method, "Metrics to print")
      ->check(CLI::IsMember({"voc", "coco", "both"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--json", evaluate.json,
                           "Also write the report document ('-': only it, "
                           "to standard output)");

  ServeOptions serve;
  auto* serve_cmd =
      app.add_subcommand("serve", "Run the annotation review service");
  serve_cmd->add_option("--manifest", serve.manifest, "Manifest under review")
      ->required();
  serve_cmd->add_option("--log", serve.log,
                        "Correction log (default: <manifest>.events.jsonl)");
  serve_cmd->add_option("--host", serve.host, "Listen address")
      ->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Listen port, 0 for any")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--images-root", serve.images_root,
                        std::string("Directory holding the scans (default: $") +
                            kImagesRootEnv + ", else the manifest directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*convert_cmd) return RunConvert(convert, out, err);
    if (*stats_cmd) return RunStats(stats, out, err);
    if (*rescale_cmd) return RunRescale(rescale, out, err);
    if (*nms_cmd) return RunNms(nms, out, err);
    if (*filter_cmd) return RunFilter(filter, out, err);
    if (*anchors_cmd) return RunAnchors(anchors, out, err);
    if (*evaluate_cmd) return RunEvaluate(evaluate, out, err);
    if (*serve_cmd) return RunServe(serve, out, err);
  } catch (const std::exception& e) {
    err << "organdet: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace organdet::cli
