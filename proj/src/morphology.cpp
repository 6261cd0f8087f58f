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

#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "imagecore.hpp"

namespace stillmotion {

namespace {

std::vector<Point> DiscOffsets(int radius) {
  std::vector<Point> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
    }
  }
  return offsets;
}

void CheckRadius(int radius) {
  if (radius < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "morphology radius must be >= 0, got " + std::to_string(radius));
  }
}

}  // namespace

Mask Dilate(const Mask& mask, int radius) {
  CheckRadius(radius);
  if (radius == 0) return mask;
  const auto offsets = DiscOffsets(radius);
  Mask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      for (Point o : offsets) {
        const int nx = x + o.x;
        const int ny = y + o.y;
        if (mask.contains(nx, ny)) out.set(nx, ny, true);
      }
    }
  }
  return out;
}

Mask Erode(const Mask& mask, int radius) {
  CheckRadius(radius);
  if (radius == 0) return mask;
  const auto offsets = DiscOffsets(radius);
  Mask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      bool keep = true;
      for (Point o : offsets) {
        const int nx = x + o.x;
        const int ny = y + o.y;
        if (mask.contains(nx, ny) && !mask.at(nx, ny)) {
          keep = false;
          break;
        }
      }
      out.set(x, y, keep);
    }
  }
  return out;
}

std::vector<std::size_t> Components::Sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count) + 1, 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

// Two-pass union-find labeling.
Components ConnectedComponents(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Components out;
  out.width = w;
  out.height = h;
  out.labels.assign(mask.size(), 0);

  std::vector<int> parent(1, 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent[static_cast<std::size_t>(b)] = a;
    } else {
      parent[static_cast<std::size_t>(a)] = b;
    }
  };

  auto idx = [w](int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const int left = x > 0 ? out.labels[idx(x - 1, y)] : 0;
      const int up = y > 0 ? out.labels[idx(x, y - 1)] : 0;
      int label = 0;
      if (left && up) {
        label = std::min(left, up);
        unite(left, up);
      } else if (left || up) {
        label = left ? left : up;
      } else {
        label = static_cast<int>(parent.size());
        parent.push_back(label);
      }
      out.labels[idx(x, y)] = label;
    }
  }

  // Provisional labels grow in raster order and roots are the minimum of
  // their set, so numbering roots in increasing order keeps raster order.
  std::vector<int> dense(parent.size(), 0);
  int next = 0;
  for (std::size_t l = 1; l < parent.size(); ++l) {
    const int root = find(static_cast<int>(l));
    if (root == static_cast<int>(l)) dense[l] = ++next;
  }
  for (int& l : out.labels) {
    if (l) l = dense[static_cast<std::size_t>(find(l))];
  }
  out.count = next;
  return out;
}

}  // namespace stillmotion
