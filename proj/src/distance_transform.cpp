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

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "imagecore.hpp"

namespace stillmotion {

namespace {

constexpr double kInf = 1e20;

// Lower envelope of parabolas rooted at (q, f[q]); writes squared distances
// into d. Felzenszwalb & Huttenlocher's one-dimensional pass.
void SquaredDistance1d(const std::vector<double>& f, std::vector<double>& d,
                       std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] >= kInf) continue;
    if (f[v[0]] >= kInf) {
      v[0] = q;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (f[v[0]] >= kInf) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double diff = q - v[k];
    d[q] = diff * diff + f[v[k]];
  }
}

}  // namespace

double DistanceSentinel(int width, int height) {
  return static_cast<double>(width) + static_cast<double>(height);
}

ScalarField DistanceTransform(const std::vector<Point>& clicks, int width, int height) {
  ScalarField out(width, height, DistanceSentinel(width, height));
  for (Point p : clicks) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw Error(ErrorCode::kOutOfRange,
                  "click (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") outside " + std::to_string(width) + "x" + std::to_string(height));
    }
  }
  if (clicks.empty()) return out;

  ScalarField sq(width, height, kInf);
  for (Point p : clicks) sq.at(p.x, p.y) = 0.0;

  const int n = std::max(width, height);
  std::vector<double> f(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);

  f.resize(static_cast<std::size_t>(height));
  d.resize(static_cast<std::size_t>(height));
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) f[y] = sq.at(x, y);
    SquaredDistance1d(f, d, v, z);
    for (int y = 0; y < height; ++y) sq.at(x, y) = d[y];
  }
  f.resize(static_cast<std::size_t>(width));
  d.resize(static_cast<std::size_t>(width));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) f[x] = sq.at(x, y);
    SquaredDistance1d(f, d, v, z);
    for (int x = 0; x < width; ++x) out.at(x, y) = std::sqrt(d[x]);
  }
  return out;
}

}  // namespace stillmotion
