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
#ifndef ORGANDET_TESTS_TESTING_FIXTURES_H_
#define ORGANDET_TESTS_TESTING_FIXTURES_H_

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <system_error>
#include <utility>

#include "gtest/gtest.h"
#include "organdet/dataset.h"
#include "organdet/eval.h"

namespace organdet::testing {

// Fresh directory under the test temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "organdet";
    if (info != nullptr) {
      name += std::string("_") + info->test_suite_name() + "_" + info->name();
    }
    for (char& c : name) {
      if (c == '/') c = '_';
    }
    path_ = std::filesystem::path(::testing::TempDir()) / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& child) const {
    return path_ / child;
  }

 private:
  std::filesystem::path path_;
};

// Random valid manifest over the plant-organ vocabulary. Coordinates are
// multiples of 1/8 so text round trips are exact.
inline DatasetManifest RandomManifest(std::mt19937_64& rng, int max_images,
                                      int max_boxes, bool with_predictions) {
  std::uniform_int_distribution<int> image_count(0, max_images);
  std::uniform_int_distribution<int> box_count(0, max_boxes);
  std::uniform_int_distribution<int> dim(16, 1600);
  std::uniform_int_distribution<int> category(1, 6);
  std::uniform_int_distribution<int> split(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DatasetManifest m;
  m.source = "random";
  const int n = image_count(rng);
  for (int i = 0; i < n; ++i) {
    AnnotatedImage image;
    image.image_id = "img" + std::to_string(i * 7919 % 10007);
    image.file_path = "scans/" + image.image_id + ".jpg";
    image.width = dim(rng);
    image.height = dim(rng);
    image.split = static_cast<Split>(split(rng));
    const int boxes = box_count(rng);
    for (int b = 0; b < boxes; ++b) {
      auto snap = [](double v) { return std::floor(v * 8) / 8; };
      double x0 = snap(unit(rng) * image.width);
      double x1 = snap(unit(rng) * image.width);
      double y0 = snap(unit(rng) * image.height);
      double y1 = snap(unit(rng) * image.height);
      if (x1 < x0) std::swap(x0, x1);
      if (y1 < y0) std::swap(y0, y1);
      AnnotatedBox box{{x0, y0, x1, y1}, category(rng), Provenance::kManual,
                       std::nullopt};
      if (with_predictions && unit(rng) < 0.5) {
        box.provenance = Provenance::kPredicted;
        box.score = std::floor(unit(rng) * 1000) / 1000;
      }
      image.boxes.push_back(box);
    }
    m.images.push_back(std::move(image));
  }
  return m;
}

}  // namespace organdet::testing

#endif  // ORGANDET_TESTS_TESTING_FIXTURES_H_
