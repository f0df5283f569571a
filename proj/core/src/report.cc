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
#include "organdet/report.h"

#include <algorithm>
#include <vector>

#include <fmt/format.h>

#include "json_codec.h"
#include "organdet/errors.h"

namespace organdet {
namespace {

using json_codec::Get;
using json_codec::json;
using json_codec::Member;

std::string Voc(double v) { return fmt::format("{:.4f}", v); }
std::string Coco(double v) { return fmt::format("{:.1f}", v); }
std::string Voc(const std::optional<double>& v) { return v ? Voc(*v) : "-"; }
std::string Coco(const std::optional<double>& v) { return v ? Coco(*v) : "-"; }

// Renders rows as a '|'-separated table with a rule under the header row.
// With `label_column` the first column is left-aligned.
std::string RenderTable(const std::vector<std::vector<std::string>>& rows,
                        bool label_column) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += " | ";
      out += i == 0 && label_column
                 ? fmt::format("{:<{}}", row[i], widths[i])
                 : fmt::format("{:>{}}", row[i], widths[i]);
    }
    out += "\n";
    if (r == 0) {
      std::size_t len = 0;
      for (std::size_t w : widths) len += w;
      len += 3 * (widths.size() - 1);
      out += std::string(len, '-') + "\n";
    }
  }
  return out;
}

json Optional(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> OptionalFrom(const json& object, const char* key,
                                   const std::string& source) {
  const json& v = Member(object, key, source);
  if (v.is_null()) return std::nullopt;
  return Get<double>(object, key, source);
}

}  // namespace

std::optional<ReportMethod> ParseReportMethod(std::string_view text) {
  if (text == "voc") return ReportMethod::kVoc;
  if (text == "coco") return ReportMethod::kCoco;
  if (text == "both") return ReportMethod::kBoth;
  return std::nullopt;
}

std::string FormatEvalReport(const EvalReport& report, ReportMethod method) {
  const bool voc = method != ReportMethod::kCoco;
  const bool coco = method != ReportMethod::kVoc;

  std::vector<std::string> header;
  std::vector<std::string> values;
  if (voc) {
    header.push_back("AP50 (Pascal VOC)");
    values.push_back(Voc(report.ap50_voc));
  }
  if (coco) {
    header.insert(header.end(), {"AP50 (COCO)", "AP75", "AP"});
    values.insert(values.end(), {Coco(report.ap50_coco), Coco(report.ap75),
                                 Coco(report.ap)});
  }
  std::string out = RenderTable({header, values}, false);
  out += "\n";

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Category", "Bounding Boxes",
                  coco ? "AP" : "AP50 (Pascal VOC)"});
  for (const CategoryResult& c : report.per_category) {
    rows.push_back({c.name, fmt::format("{}", c.gt_count),
                    coco ? Coco(c.ap) : Voc(c.ap50_voc)});
  }
  out += RenderTable(rows, true);
  return out;
}

std::string EvalReportToJson(const EvalReport& report) {
  json categories = json::array();
  for (const CategoryResult& c : report.per_category) {
    categories.push_back({{"name", c.name},
                          {"gt_count", c.gt_count},
                          {"ap50_voc", Optional(c.ap50_voc)},
                          {"ap50", Optional(c.ap50)},
                          {"ap75", Optional(c.ap75)},
                          {"ap", Optional(c.ap)}});
  }
  json out = {{"version", 1},
              {"score_threshold", report.score_threshold},
              {"ap50_voc", report.ap50_voc},
              {"ap50_coco", report.ap50_coco},
              {"ap75", report.ap75},
              {"ap", report.ap},
              {"ap_by_threshold", report.ap_by_threshold},
              {"per_category", std::move(categories)}};
  return out.dump(2) + "\n";
}

EvalReport ParseEvalReportJson(std::string_view document,
                               const std::string& source) {
  const json root = json_codec::Parse(document, source);
  if (Get<int>(root, "version", source) != 1) {
    throw ParseError(source, "unsupported report version");
  }
  EvalReport report;
  report.score_threshold = Get<double>(root, "score_threshold", source);
  report.ap50_voc = Get<double>(root, "ap50_voc", source);
  report.ap50_coco = Get<double>(root, "ap50_coco", source);
  report.ap75 = Get<double>(root, "ap75", source);
  report.ap = Get<double>(root, "ap", source);
  const json& thresholds = Member(root, "ap_by_threshold", source);
  if (!thresholds.is_array()) {
    throw ParseError(source, "'ap_by_threshold' must be an array");
  }
  for (const json& v : thresholds) {
    if (!v.is_number()) throw ParseError(source, "non-numeric threshold AP");
    report.ap_by_threshold.push_back(v.get<double>());
  }
  const json& categories = Member(root, "per_category", source);
  if (!categories.is_array()) {
    throw ParseError(source, "'per_category' must be an array");
  }
  for (const json& c : categories) {
    CategoryResult result;
    result.name = Get<std::string>(c, "name", source);
    result.gt_count =
        static_cast<std::size_t>(Get<long long>(c, "gt_count", source));
    result.ap50_voc = OptionalFrom(c, "ap50_voc", source);
    result.ap50 = OptionalFrom(c, "ap50", source);
    result.ap75 = OptionalFrom(c, "ap75", source);
    result.ap = OptionalFrom(c, "ap", source);
    report.per_category.push_back(std::move(result));
  }
  return report;
}

}  // namespace organdet
