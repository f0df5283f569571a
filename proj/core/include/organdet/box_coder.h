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
#ifndef ORGANDET_BOX_CODER_H_
#define ORGANDET_BOX_CODER_H_

#include "organdet/geometry.h"

namespace organdet {

// Offsets of a target box relative to an anchor: centre shifts normalised by
// anchor size, and log size ratios.
struct BoxDeltas {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;

  friend bool operator==(const BoxDeltas&, const BoxDeltas&) = default;
};

// Upper bound applied to tw and th when decoding, ln(1000 / 16).
extern const double kMaxLogScaleDelta;

// Throws std::invalid_argument if the anchor or target has non-positive
// width or height.
BoxDeltas EncodeDeltas(const BoundingBox& anchor, const BoundingBox& target);

// Inverse of EncodeDeltas. tw and th are clamped to kMaxLogScaleDelta.
// Throws std::invalid_argument for non-positive anchors or non-finite deltas.
BoundingBox DecodeDeltas(const BoundingBox& anchor, const BoxDeltas& deltas);

}  // namespace organdet

#endif  // ORGANDET_BOX_CODER_H_
