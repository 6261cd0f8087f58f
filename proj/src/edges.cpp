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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"
#include "imagecore.hpp"

namespace stillmotion {

namespace {

int Clamp(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

ScalarField GaussianBlur(const ScalarField& in, double sigma, int radius) {
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;

  ScalarField tmp(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] *
               in.at(Clamp(x + i, 0, in.width - 1), y);
      }
      tmp.at(x, y) = acc;
    }
  }
  ScalarField out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] *
               tmp.at(x, Clamp(y + i, 0, in.height - 1));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

void SobelComponents(const ScalarField& f, ScalarField& gx, ScalarField& gy) {
  auto v = [&](int x, int y) {
    return f.at(Clamp(x, 0, f.width - 1), Clamp(y, 0, f.height - 1));
  };
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      gx.at(x, y) = (v(x + 1, y - 1) + 2.0 * v(x + 1, y) + v(x + 1, y + 1)) -
                    (v(x - 1, y - 1) + 2.0 * v(x - 1, y) + v(x - 1, y + 1));
      gy.at(x, y) = (v(x - 1, y + 1) + 2.0 * v(x, y + 1) + v(x + 1, y + 1)) -
                    (v(x - 1, y - 1) + 2.0 * v(x, y - 1) + v(x + 1, y - 1));
    }
  }
}

void RequireKernelFits(int width, int height) {
  if (width < 3 || height < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge detection needs at least 3x3 pixels, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

ScalarField SobelGradient(const ScalarField& field) {
  RequireKernelFits(field.width, field.height);
  ScalarField gx(field.width, field.height), gy(field.width, field.height);
  SobelComponents(field, gx, gy);
  ScalarField out(field.width, field.height);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = std::sqrt(gx.values[i] * gx.values[i] + gy.values[i] * gy.values[i]);
  }
  return out;
}

ScalarField SobelGradient(const ImageBuffer& image) {
  RequireKernelFits(image.width(), image.height());
  return SobelGradient(Luma(image));
}

Mask CannyEdges(const ImageBuffer& image, double low, double high,
                const CannyOptions& options) {
  if (!(low >= 0.0) || !(low <= high)) {
    throw Error(ErrorCode::kInvalidArgument,
                "canny thresholds need 0 <= low <= high, got low=" +
                    std::to_string(low) + " high=" + std::to_string(high));
  }
  if (!(options.sigma > 0.0) || options.kernel_radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "canny smoothing needs sigma > 0");
  }
  RequireKernelFits(image.width(), image.height());
  const int w = image.width();
  const int h = image.height();

  const ScalarField smooth = GaussianBlur(Luma(image), options.sigma, options.kernel_radius);
  ScalarField gx(w, h), gy(w, h), mag(w, h);
  SobelComponents(smooth, gx, gy);
  for (std::size_t i = 0; i < mag.values.size(); ++i) {
    mag.values[i] = std::hypot(gx.values[i], gy.values[i]);
  }

  auto mag_or_zero = [&](int x, int y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag.at(x, y);
  };

  // Non-maximum suppression along the quantized gradient direction. Ties are
  // broken toward the pixel on the negative side so plateaus stay one pixel
  // wide.
  ScalarField thin(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag.at(x, y);
      if (m <= 0.0) continue;
      double angle = std::atan2(gy.at(x, y), gx.at(x, y)) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      int dx = 1, dy = 0;
      if (angle >= 22.5 && angle < 67.5) {
        dx = 1, dy = 1;
      } else if (angle >= 67.5 && angle < 112.5) {
        dx = 0, dy = 1;
      } else if (angle >= 112.5 && angle < 157.5) {
        dx = -1, dy = 1;
      }
      const double before = mag_or_zero(x - dx, y - dy);
      const double after = mag_or_zero(x + dx, y + dy);
      if (m > before && m >= after) thin.at(x, y) = m;
    }
  }

  Mask edges(w, h);
  std::vector<Point> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (thin.at(x, y) > 0.0 && thin.at(x, y) >= high && !edges.at(x, y)) {
        edges.set(x, y, true);
        stack.push_back({x, y});
      }
    }
  }
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = p.x + dx;
        const int ny = p.y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h || edges.at(nx, ny)) continue;
        const double t = thin.at(nx, ny);
        if (t > 0.0 && t >= low) {
          edges.set(nx, ny, true);
          stack.push_back({nx, ny});
        }
      }
    }
  }
  return edges;
}

}  // namespace stillmotion
