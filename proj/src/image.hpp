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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stillmotion {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 0;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

// Row-major RGBA raster, 8 bits per channel. Never empty.
class ImageBuffer {
 public:
  ImageBuffer(int width, int height, Rgba fill = {0, 0, 0, 0});
  ImageBuffer(int width, int height, std::vector<std::uint8_t> rgba);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  Rgba at(int x, int y) const;
  void set(int x, int y, Rgba value);

  std::uint8_t* pixel(int x, int y) { return &data_[offset(x, y)]; }
  const std::uint8_t* pixel(int x, int y) const { return &data_[offset(x, y)]; }

  std::span<const std::uint8_t> bytes() const { return data_; }
  std::span<std::uint8_t> bytes() { return data_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
           4;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Binary field; true marks the subject.
class Mask {
 public:
  Mask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool same_shape(const Mask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  Mask complement() const;
  // True when every set bit of this mask is also set in `other`.
  bool subset_of(const Mask& other) const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// Row-major real-valued field (distances, gradient magnitudes).
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  ScalarField(int w, int h, double fill = 0.0);

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

struct ClickSet {
  std::vector<Point> positives;
  std::vector<Point> negatives;

  friend bool operator==(const ClickSet&, const ClickSet&) = default;
};

// Throws kOutOfRange for a click outside width x height and kConflict for a
// pixel listed as both positive and negative.
void ValidateClicks(const ClickSet& clicks, int width, int height);

// Luma (0.299 R + 0.587 G + 0.114 B) of every pixel, in [0, 255].
ScalarField Luma(const ImageBuffer& image);

// Opaque white where the mask is set, opaque black elsewhere.
ImageBuffer MaskToImage(const Mask& mask);
// Pixels whose luma exceeds 127 become set.
Mask ImageToMask(const ImageBuffer& image);

}  // namespace stillmotion
