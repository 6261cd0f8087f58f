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

#include "inpaint.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "imagecore.hpp"

namespace stillmotion {

namespace {

constexpr int kChannels = 4;

struct Unknown {
  std::size_t index;                 // pixel index
  std::array<std::size_t, 4> nbrs;   // in-bounds neighbour pixel indices
  int nbr_count;
};

}  // namespace

void ValidateInpaintConfig(const InpaintConfig& config) {
  if (!(config.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "inpaint tolerance must be > 0");
  }
  if (config.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "inpaint max_iterations must be >= 1");
  }
  if (config.pre_dilation < 0) {
    throw Error(ErrorCode::kInvalidArgument, "inpaint pre_dilation must be >= 0");
  }
}

InpaintResult InpaintDiffusion(const ImageBuffer& image, const Mask& hole,
                               const InpaintConfig& config) {
  ValidateInpaintConfig(config);
  if (hole.width() != image.width() || hole.height() != image.height()) {
    throw Error(ErrorCode::kInvalidArgument,
                "hole mask is " + std::to_string(hole.width()) + "x" +
                    std::to_string(hole.height()) + " but image is " +
                    std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  const std::size_t holes = hole.count();
  if (holes == hole.size()) {
    throw Error(ErrorCode::kNoBoundary, "no boundary data: hole covers the entire image");
  }
  InpaintResult result{image, 0.0, 0, true};
  if (holes == 0) return result;

  const int w = image.width();
  const int h = image.height();
  const std::size_t n = image.pixel_count();
  std::vector<double> v(n * kChannels);
  const auto src = image.bytes();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = src[i];

  // Neighbour tables, split by checkerboard colour.
  std::vector<Unknown> red, black;
  std::array<double, kChannels> lo, hi;
  lo.fill(255.0);
  hi.fill(0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!hole.at(x, y)) continue;
      Unknown u{static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x), {}, 0};
      const int dx[4] = {0, -1, 1, 0};
      const int dy[4] = {-1, 0, 0, 1};
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k];
        const int ny = y + dy[k];
        if (!hole.contains(nx, ny)) continue;
        const std::size_t ni = static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) + static_cast<std::size_t>(nx);
        u.nbrs[static_cast<std::size_t>(u.nbr_count++)] = ni;
        if (!hole.at(nx, ny)) {
          for (int c = 0; c < kChannels; ++c) {
            lo[c] = std::min(lo[c], v[ni * kChannels + c]);
            hi[c] = std::max(hi[c], v[ni * kChannels + c]);
          }
        }
      }
      ((x + y) % 2 == 0 ? red : black).push_back(u);
    }
  }

  // Initial guess: peel the hole from its rim inward, each layer taking the
  // mean of neighbours fixed in earlier layers.
  {
    std::vector<char> fixed(n, 1);
    for (const auto* list : {&red, &black}) {
      for (const Unknown& u : *list) fixed[u.index] = 0;
    }
    std::vector<const Unknown*> pending;
    for (const auto* list : {&red, &black}) {
      for (const Unknown& u : *list) pending.push_back(&u);
    }
    std::sort(pending.begin(), pending.end(),
              [](const Unknown* a, const Unknown* b) { return a->index < b->index; });
    while (!pending.empty()) {
      std::vector<const Unknown*> layer, rest;
      for (const Unknown* u : pending) {
        bool touches = false;
        for (int k = 0; k < u->nbr_count; ++k) touches |= fixed[u->nbrs[static_cast<std::size_t>(k)]] != 0;
        (touches ? layer : rest).push_back(u);
      }
      for (const Unknown* u : layer) {
        for (int c = 0; c < kChannels; ++c) {
          double sum = 0.0;
          int cnt = 0;
          for (int k = 0; k < u->nbr_count; ++k) {
            const std::size_t ni = u->nbrs[static_cast<std::size_t>(k)];
            if (fixed[ni]) {
              sum += v[ni * kChannels + c];
              ++cnt;
            }
          }
          v[u->index * kChannels + c] = sum / cnt;
        }
      }
      for (const Unknown* u : layer) fixed[u->index] = 1;
      pending.swap(rest);
    }
  }

  // Returns the largest change made to any value.
  auto relax = [&](const std::vector<Unknown>& list) {
    double change = 0.0;
    for (const Unknown& u : list) {
      const double inv = 1.0 / u.nbr_count;
      for (int c = 0; c < kChannels; ++c) {
        double sum = 0.0;
        for (int k = 0; k < u.nbr_count; ++k) sum += v[u.nbrs[static_cast<std::size_t>(k)] * kChannels + c];
        double& cell = v[u.index * kChannels + c];
        change = std::max(change, std::abs(sum * inv - cell));
        cell = sum * inv;
      }
    }
    return change;
  };
  auto residual = [&]() {
    double r = 0.0;
    for (const auto* list : {&red, &black}) {
      for (const Unknown& u : *list) {
        const double inv = 1.0 / u.nbr_count;
        for (int c = 0; c < kChannels; ++c) {
          double sum = 0.0;
          for (int k = 0; k < u.nbr_count; ++k) sum += v[u.nbrs[static_cast<std::size_t>(k)] * kChannels + c];
          r = std::max(r, std::abs(v[u.index * kChannels + c] - sum * inv));
        }
      }
    }
    return r;
  };

  // A small residual alone does not bound the error on wide holes, so the
  // distance to the fixed point is also estimated from the geometric decay
  // of successive sweep changes: err ~ delta * rho / (1 - rho).
  double previous_change = 0.0;
  double error_estimate = std::numeric_limits<double>::infinity();
  result.residual = residual();
  result.converged = result.residual <= config.tolerance && result.residual == 0.0;
  while (!result.converged && result.iterations < config.max_iterations) {
    const double change = std::max(relax(red), relax(black));
    ++result.iterations;
    if (change == 0.0) {
      error_estimate = 0.0;
    } else if (previous_change > 0.0 && change < previous_change) {
      const double rho = change / previous_change;
      error_estimate = change * rho / (1.0 - rho);
    } else {
      error_estimate = std::numeric_limits<double>::infinity();
    }
    previous_change = change;
    result.residual = residual();
    result.converged = result.residual <= config.tolerance && error_estimate <= config.tolerance;
  }

  auto out = result.image.bytes();
  for (const auto* list : {&red, &black}) {
    for (const Unknown& u : *list) {
      for (int c = 0; c < kChannels; ++c) {
        const double value = std::clamp(std::round(v[u.index * kChannels + c]), 0.0, 255.0);
        if (value < lo[c] || value > hi[c]) {
          throw Error(ErrorCode::kInternal, "inpaint violated the maximum principle");
        }
        out[u.index * kChannels + c] = static_cast<std::uint8_t>(value);
      }
    }
  }
  return result;
}

InpaintResult MakeBackground(const ImageBuffer& image, const Mask& subject,
                             const InpaintConfig& config) {
  ValidateInpaintConfig(config);
  if (subject.width() != image.width() || subject.height() != image.height()) {
    throw Error(ErrorCode::kInvalidArgument, "subject mask does not match image dimensions");
  }
  return InpaintDiffusion(image, Dilate(subject, config.pre_dilation), config);
}

}  // namespace stillmotion
