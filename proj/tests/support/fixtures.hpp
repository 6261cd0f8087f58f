// Copyright 2026 The stillmotion Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic scenes and on-disk pipeline fixtures shared by several tests.
#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <string>

#include "image.hpp"
#include "image_io.hpp"

namespace fixtures {

using stillmotion::ImageBuffer;
using stillmotion::Rgba;

// Textured background with a solid-coloured ellipse in the middle; the
// ellipse centre is a natural positive click.
inline ImageBuffer TwoRegionImage(int w, int h, unsigned seed = 1) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> noise(-10, 10);
  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x - w / 2.0) / (w / 4.0), dy = (y - h / 2.0) / (h / 3.5);
      if (dx * dx + dy * dy <= 1.0) {
        img.set(x, y, {230, 60, 40, 255});
      } else {
        const int base = 60 + (x * 80) / w;
        img.set(x, y, {std::uint8_t(base + noise(rng)), std::uint8_t(140 + noise(rng)),
                       std::uint8_t(200 - (y * 60) / h + noise(rng)), 255});
      }
    }
  }
  return img;
}

inline void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string ReadText(const std::filesystem::path& path) {
  const auto bytes = stillmotion::ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

// Writes input.png and clicks.json into `dir` and returns a config document
// whose outputs go to `dir`/`out_name`.
inline nlohmann::json PipelineDoc(const std::filesystem::path& dir, int size, const nlohmann::json& animation,
                                  const std::string& out_name = "out") {
  stillmotion::SaveImage(TwoRegionImage(size, size), dir / "input.png");
  WriteText(dir / "clicks.json", nlohmann::json{{"positives", {{size / 2, size / 2}}},
                                                {"negatives", {{2, 2}}}}
                                     .dump());
  return {{"input", (dir / "input.png").string()},
          {"clicks", (dir / "clicks.json").string()},
          {"segmentation", {{"k", 4}, {"seed", 7}}},
          {"animation", animation},
          {"output", {{"dir", (dir / out_name).string()}}}};
}

}  // namespace fixtures
