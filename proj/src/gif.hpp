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

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "render.hpp"

namespace stillmotion {

struct Palette {
  std::vector<std::array<std::uint8_t, 3>> colors;
  std::vector<std::uint8_t> indices;  // one per pixel
};

// Median-cut quantization to at most `max_colors` entries. Frames with no
// more than `max_colors` distinct colours are indexed losslessly. Alpha is
// ignored.
Palette QuantizeMedianCut(const ImageBuffer& image, int max_colors = 256);

// GIF89a with an infinite NETSCAPE2.0 loop, one local palette per frame and
// the given per-frame delay in centiseconds.
std::vector<std::uint8_t> EncodeGif(const std::vector<Frame>& frames, int delay_cs);

// LZW code stream for GIF image data, without the sub-block framing.
std::vector<std::uint8_t> LzwEncode(const std::vector<std::uint8_t>& indices, int min_code_size);

}  // namespace stillmotion
