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

#include "image.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace stillmotion {

namespace {

void CheckDimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

std::string PointText(Point p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, Rgba fill)
    : width_(width), height_(height) {
  CheckDimensions(width, height);
  data_.resize(pixel_count() * 4);
  for (std::size_t i = 0; i < data_.size(); i += 4) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
    data_[i + 3] = fill.a;
  }
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> rgba)
    : width_(width), height_(height), data_(std::move(rgba)) {
  CheckDimensions(width, height);
  if (data_.size() != pixel_count() * 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel buffer holds " + std::to_string(data_.size()) +
                    " bytes, expected " + std::to_string(pixel_count() * 4));
  }
}

Rgba ImageBuffer::at(int x, int y) const {
  const std::uint8_t* p = pixel(x, y);
  return {p[0], p[1], p[2], p[3]};
}

void ImageBuffer::set(int x, int y, Rgba value) {
  std::uint8_t* p = pixel(x, y);
  p[0] = value.r;
  p[1] = value.g;
  p[2] = value.b;
  p[3] = value.a;
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
  CheckDimensions(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

Mask Mask::complement() const {
  Mask out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

bool Mask::subset_of(const Mask& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

ScalarField::ScalarField(int w, int h, double fill) : width(w), height(h) {
  CheckDimensions(w, h);
  values.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

void ValidateClicks(const ClickSet& clicks, int width, int height) {
  auto check = [&](const std::vector<Point>& list, const char* kind) {
    for (Point p : list) {
      if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
        throw Error(ErrorCode::kOutOfRange,
                    std::string(kind) + " click " + PointText(p) +
                        " outside " + std::to_string(width) + "x" +
                        std::to_string(height) + " image");
      }
    }
  };
  check(clicks.positives, "positive");
  check(clicks.negatives, "negative");
  for (Point p : clicks.positives) {
    if (std::find(clicks.negatives.begin(), clicks.negatives.end(), p) !=
        clicks.negatives.end()) {
      throw Error(ErrorCode::kConflict,
                  "pixel " + PointText(p) + " is both a positive and a negative click");
    }
  }
}

ScalarField Luma(const ImageBuffer& image) {
  ScalarField out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::uint8_t* p = image.pixel(x, y);
      out.at(x, y) = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
  }
  return out;
}

ImageBuffer MaskToImage(const Mask& mask) {
  ImageBuffer out(mask.width(), mask.height(), Rgba{0, 0, 0, 255});
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) out.set(x, y, Rgba{255, 255, 255, 255});
    }
  }
  return out;
}

Mask ImageToMask(const ImageBuffer& image) {
  Mask out(image.width(), image.height());
  const ScalarField luma = Luma(image);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.set(x, y, luma.at(x, y) > 127.0);
    }
  }
  return out;
}

}  // namespace stillmotion
