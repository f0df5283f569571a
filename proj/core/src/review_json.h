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
// JSON payloads of the review store and service. Not installed.
#ifndef ORGANDET_SRC_REVIEW_JSON_H_
#define ORGANDET_SRC_REVIEW_JSON_H_

#include <string>

#include "json_codec.h"
#include "organdet/review_store.h"

namespace organdet::review_json {

using json_codec::json;

json SnapshotToJson(const BoxSnapshot& snapshot,
                    const CategoryVocabulary& vocabulary);
BoxSnapshot SnapshotFromJson(const json& value,
                             const CategoryVocabulary& vocabulary,
                             const std::string& source);

json EventToJson(const CorrectionEvent& event,
                 const CategoryVocabulary& vocabulary);
// `image_id` fills in a missing "image_id" field.
CorrectionEvent EventFromJson(const json& value,
                              const CategoryVocabulary& vocabulary,
                              const std::string& source,
                              const std::string& image_id = "");

json ColorToJson(const DisplayColor& color);
json AnnotationsToJson(const ImageAnnotations& annotations,
                       const CategoryVocabulary& vocabulary);
json SummaryToJson(const ImageSummary& summary,
                   const CategoryVocabulary& vocabulary);
json StatusCountsToJson(const StatusCounts& counts);

}  // namespace organdet::review_json

#endif  // ORGANDET_SRC_REVIEW_JSON_H_
