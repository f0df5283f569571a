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
#include "organdet/box_coder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace organdet {

const double kMaxLogScaleDelta = std::log(1000.0 / 16.0);

namespace {

void RequirePositiveSize(const BoundingBox& box, const char* what) {
  if (!box.valid() || !(box.width() > 0.0) || !(box.height() > 0.0)) {
    throw std::invalid_argument(std::string(what) +
                                " must have positive width and height");
  }
}

}  // namespace

BoxDeltas EncodeDeltas(const BoundingBox& anchor, const BoundingBox& target) {
  RequirePositiveSize(anchor, "anchor");
  RequirePositiveSize(target, "target box");
  const double aw = anchor.width();
  const double ah = anchor.height();
  return BoxDeltas{(target.center_x() - anchor.center_x()) / aw,
                   (target.center_y() - anchor.center_y()) / ah,
                   std::log(target.width() / aw),
                   std::log(target.height() / ah)};
}

BoundingBox DecodeDeltas(const BoundingBox& anchor, const BoxDeltas& deltas) {
  RequirePositiveSize(anchor, "anchor");
  if (!std::isfinite(deltas.tx) || !std::isfinite(deltas.ty) ||
      !std::isfinite(deltas.tw) || !std::isfinite(deltas.th)) {
    throw std::invalid_argument("box deltas must be finite");
  }
  const double aw = anchor.width();
  const double ah = anchor.height();
  const double cx = anchor.center_x() + deltas.tx * aw;
  const double cy = anchor.center_y() + deltas.ty * ah;
  const double w = aw * std::exp(std::min(deltas.tw, kMaxLogScaleDelta));
  const double h = ah * std::exp(std::min(deltas.th, kMaxLogScaleDelta));
  return BoundingBox{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

}  // namespace organdet
