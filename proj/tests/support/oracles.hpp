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

// Independent reference implementations used only by tests. None of these
// share code with the library paths they check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "image.hpp"

namespace oracle {

using stillmotion::ImageBuffer;
using stillmotion::Mask;
using stillmotion::Point;

// Minimum Euclidean distance to any click, by exhaustive search.
inline double BruteDistance(const std::vector<Point>& clicks, int x, int y) {
  double best = std::numeric_limits<double>::infinity();
  for (Point c : clicks) best = std::min(best, std::hypot(double(x - c.x), double(y - c.y)));
  return best;
}

// Recursive-free flood fill labeling: returns per-pixel component ids with
// -1 for background (ids are arbitrary).
inline std::vector<int> FloodFillLabels(const Mask& m) {
  std::vector<int> label(m.size(), -1);
  int next = 0;
  for (int y0 = 0; y0 < m.height(); ++y0) {
    for (int x0 = 0; x0 < m.width(); ++x0) {
      if (!m.at(x0, y0) || label[std::size_t(y0 * m.width() + x0)] >= 0) continue;
      std::vector<Point> queue{{x0, y0}};
      label[std::size_t(y0 * m.width() + x0)] = next;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const Point p = queue[qi];
        const Point nb[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (Point q : nb) {
          if (!m.contains(q.x, q.y) || !m.at(q.x, q.y)) continue;
          int& l = label[std::size_t(q.y * m.width() + q.x)];
          if (l < 0) {
            l = next;
            queue.push_back(q);
          }
        }
      }
      ++next;
    }
  }
  return label;
}

// True when two labelings induce the same partition (bijective relabeling).
inline bool SamePartition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::pair<int, int>> ab, ba;
  auto lookup = [](std::vector<std::pair<int, int>>& map, int k, int v) {
    for (auto& [key, val] : map) {
      if (key == k) return val == v;
    }
    map.emplace_back(k, v);
    return true;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!lookup(ab, a[i], b[i]) || !lookup(ba, b[i], a[i])) return false;
  }
  return true;
}

// Dense Gaussian elimination with partial pivoting: solves A x = b.
inline std::vector<double> SolveDense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Exact harmonic fill of `hole` per channel by assembling the discrete
// Laplace system (each unknown equals the mean of its in-bounds 4-neighbours)
// and solving it directly. Returns unrounded values, 4 per pixel.
inline std::vector<double> LaplaceDirect(const ImageBuffer& image, const Mask& hole) {
  const int w = image.width();
  const int h = image.height();
  std::vector<int> unknown_id(std::size_t(w * h), -1);
  std::vector<Point> unknowns;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (hole.at(x, y)) {
        unknown_id[std::size_t(y * w + x)] = int(unknowns.size());
        unknowns.push_back({x, y});
      }
    }
  }
  std::vector<double> out(std::size_t(w * h * 4));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 4; ++c) out[std::size_t((y * w + x) * 4 + c)] = image.pixel(x, y)[c];
    }
  }
  const std::size_t n = unknowns.size();
  if (n == 0) return out;
  for (int c = 0; c < 4; ++c) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Point p = unknowns[i];
      const Point nb[4] = {{p.x, p.y - 1}, {p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y + 1}};
      double degree = 0;
      for (Point q : nb) {
        if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h) continue;
        degree += 1;
        const int id = unknown_id[std::size_t(q.y * w + q.x)];
        if (id >= 0) {
          a[i][std::size_t(id)] -= 1.0;
        } else {
          b[i] += image.pixel(q.x, q.y)[c];
        }
      }
      a[i][i] += degree;
    }
    const auto x = SolveDense(a, b);
    for (std::size_t i = 0; i < n; ++i) {
      out[std::size_t((unknowns[i].y * w + unknowns[i].x) * 4 + c)] = x[i];
    }
  }
  return out;
}

// Exhaustive minimum within-cluster sum of squares over every assignment of
// `points` to exactly k non-empty clusters. Returns the optimal labels.
template <std::size_t D>
std::vector<int> BestPartition(const std::vector<std::array<double, D>>& points, int k, double* best_cost) {
  const std::size_t n = points.size();
  std::vector<int> labels(n, 0), best;
  double best_value = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> count(std::size_t(k), 0);
    for (int l : labels) ++count[std::size_t(l)];
    if (std::all_of(count.begin(), count.end(), [](int c) { return c > 0; })) {
      std::vector<std::array<double, D>> mean(std::size_t(k), std::array<double, D>{});
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < D; ++d) mean[std::size_t(labels[i])][d] += points[i][d];
      }
      for (int c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < D; ++d) mean[std::size_t(c)][d] /= count[std::size_t(c)];
      }
      double cost = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < D; ++d) {
          const double diff = points[i][d] - mean[std::size_t(labels[i])][d];
          cost += diff * diff;
        }
      }
      if (cost < best_value - 1e-9) {
        best_value = cost;
        best = labels;
      }
    }
    std::size_t i = 0;
    while (i < n && labels[i] == k - 1) labels[i++] = 0;
    if (i == n) break;
    ++labels[i];
  }
  if (best_cost) *best_cost = best_value;
  return best;
}

inline Mask RandomMask(std::mt19937& rng, int w, int h, double density) {
  Mask m(w, h);
  std::bernoulli_distribution bit(density);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, bit(rng));
  }
  return m;
}

inline ImageBuffer RandomImage(std::mt19937& rng, int w, int h) {
  ImageBuffer img(w, h);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& b : img.bytes()) b = std::uint8_t(byte(rng));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.pixel(x, y)[3] = 255;
  }
  return img;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("stillmotion_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
