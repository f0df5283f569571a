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
#ifndef ORGANDET_COCO_JSON_H_
#define ORGANDET_COCO_JSON_H_

#include <string>
#include <string_view>

#include "organdet/dataset.h"

namespace organdet {

// COCO-style document: images [{id, file_name, width, height}],
// annotations [{id, image_id, category_id, bbox: [x, y, w, h], area,
// iscrowd, score?}], categories [{id, name}]. Images are numbered from 1 in
// image_id order, annotations from 1 in image then box order. Extra
// per-image "image_key", "split" and "scale" and per-annotation
// "provenance" fields keep the conversion lossless.
std::string WriteCocoJson(const DatasetManifest& manifest);

// Inverse of WriteCocoJson; also accepts plain COCO files. Category ids may
// be sparse and are renumbered in ascending id order. Annotations with a
// "score" and no "provenance" are read as predictions. Boxes are clipped to
// their image.
//
// Throws ParseError on malformed documents and on annotations referring to
// unknown image or category ids.
DatasetManifest ReadCocoJson(std::string_view document,
                             const std::string& source = "");

}  // namespace organdet

#endif  // ORGANDET_COCO_JSON_H_
