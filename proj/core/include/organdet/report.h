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
#ifndef ORGANDET_REPORT_H_
#define ORGANDET_REPORT_H_

#include <optional>
#include <string>
#include <string_view>

#include "organdet/eval.h"

namespace organdet {

enum class ReportMethod { kVoc, kCoco, kBoth };

std::optional<ReportMethod> ParseReportMethod(std::string_view text);

// Headline table (AP50 (Pascal VOC) | AP50 (COCO) | AP75 | AP) followed by a
// per-category table (Category | Bounding Boxes | AP). VOC values print with
// four decimals on a 0-1 scale, COCO values with one decimal on 0-100.
// Categories without ground truth print "-".
std::string FormatEvalReport(const EvalReport& report, ReportMethod method);

// Lossless JSON form of `report`.
std::string EvalReportToJson(const EvalReport& report);

// Throws ParseError on malformed input.
EvalReport ParseEvalReportJson(std::string_view document,
                               const std::string& source = "");

}  // namespace organdet

#endif  // ORGANDET_REPORT_H_
