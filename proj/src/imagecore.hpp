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

#include <cstddef>
#include <vector>

#include "image.hpp"

namespace stillmotion {

// Exact Euclidean distance from every pixel to the nearest point in `clicks`.
// An empty list yields the sentinel width + height everywhere, which is
// strictly larger than any in-image distance.
ScalarField DistanceTransform(const std::vector<Point>& clicks, int width, int height);
double DistanceSentinel(int width, int height);

// Gradient magnitude of luma with the 3x3 Sobel kernels, replicated borders.
ScalarField SobelGradient(const ImageBuffer& image);
ScalarField SobelGradient(const ScalarField& field);

struct CannyOptions {
  double sigma = 1.4;
  int kernel_radius = 2;
};

// Gaussian smoothing, Sobel gradient, non-maximum suppression, then
// hysteresis with 8-connected propagation from pixels >= high.
Mask CannyEdges(const ImageBuffer& image, double low, double high,
                const CannyOptions& options = {});

// Morphology with a disc of the given radius (offsets with dx^2 + dy^2 <= r^2).
// Pixels outside the image are background for dilation and foreground for
// erosion, which makes the two operators dual on complements.
Mask Dilate(const Mask& mask, int radius);
Mask Erode(const Mask& mask, int radius);

struct Components {
  int width = 0;
  int height = 0;
  std::vector<int> labels;  // 0 = background, components numbered from 1
  int count = 0;

  int at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  // Pixel count per label; index 0 is the background.
  std::vector<std::size_t> Sizes() const;
};

// 4-connected labeling. Labels are assigned in raster order of each
// component's first pixel.
Components ConnectedComponents(const Mask& mask);

}  // namespace stillmotion
