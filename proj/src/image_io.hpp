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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "image.hpp"

namespace stillmotion {

// Decodes PNG or binary PPM (P6), chosen by content. Gray and RGB inputs are
// promoted to RGBA with alpha 255. Missing files raise kNotFound, bad bytes
// kDecode, zero-sized images kInvalidArgument.
ImageBuffer LoadImage(const std::filesystem::path& path);
ImageBuffer DecodeImage(std::span<const std::uint8_t> bytes);

// Writes PNG (8-bit RGBA, non-interlaced) unless the extension is ".ppm", in
// which case a P6 file is written and alpha is dropped.
void SaveImage(const ImageBuffer& image, const std::filesystem::path& path);

std::vector<std::uint8_t> EncodePng(const ImageBuffer& image);
std::vector<std::uint8_t> EncodePpm(const ImageBuffer& image);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace stillmotion
