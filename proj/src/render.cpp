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

#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "image_io.hpp"

namespace stillmotion {

namespace {

constexpr int kSubpixelBits = 8;
constexpr std::int64_t kSubpixel = 1 << kSubpixelBits;

struct FixedPoint {
  std::int64_t x;
  std::int64_t y;
};

FixedPoint Snap(Vec2 v) {
  return {std::llround(v.x * kSubpixel), std::llround(v.y * kSubpixel)};
}

std::int64_t Edge(FixedPoint a, FixedPoint b, FixedPoint p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

// Top and left edges own the pixel centres lying exactly on them.
bool OwnsBoundary(FixedPoint a, FixedPoint b) {
  const std::int64_t dx = b.x - a.x;
  const std::int64_t dy = b.y - a.y;
  return dy < 0 || (dy == 0 && dx > 0);
}

// Calls fn(px, py, w0, w1, w2, tri) for every pixel centre covered by a
// triangle, with barycentric weights of its three vertices.
template <typename Fn>
void ForEachCoveredPixel(const Mesh& mesh, int width, int height, Fn&& fn) {
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    std::array<int, 3> idx = mesh.triangles[t];
    for (int i : idx) {
      if (i < 0 || static_cast<std::size_t>(i) >= mesh.vertices.size()) {
        throw Error(ErrorCode::kInvalidArgument, "triangle index out of range");
      }
    }
    FixedPoint v0 = Snap(mesh.vertices[static_cast<std::size_t>(idx[0])]);
    FixedPoint v1 = Snap(mesh.vertices[static_cast<std::size_t>(idx[1])]);
    FixedPoint v2 = Snap(mesh.vertices[static_cast<std::size_t>(idx[2])]);
    std::int64_t area = Edge(v0, v1, v2);
    if (area == 0) continue;
    if (area < 0) {
      std::swap(v1, v2);
      std::swap(idx[1], idx[2]);
      area = -area;
    }
    const std::int64_t bias0 = OwnsBoundary(v1, v2) ? 0 : 1;
    const std::int64_t bias1 = OwnsBoundary(v2, v0) ? 0 : 1;
    const std::int64_t bias2 = OwnsBoundary(v0, v1) ? 0 : 1;

    const std::int64_t min_x = std::min({v0.x, v1.x, v2.x});
    const std::int64_t max_x = std::max({v0.x, v1.x, v2.x});
    const std::int64_t min_y = std::min({v0.y, v1.y, v2.y});
    const std::int64_t max_y = std::max({v0.y, v1.y, v2.y});
    // Pixel px has its centre at px*256 + 128.
    auto first = [](std::int64_t lo) {
      return static_cast<std::int64_t>(std::ceil(static_cast<double>(lo - kSubpixel / 2) / kSubpixel));
    };
    auto last = [](std::int64_t hi) {
      return static_cast<std::int64_t>(std::floor(static_cast<double>(hi - kSubpixel / 2) / kSubpixel));
    };
    const int x_begin = static_cast<int>(std::max<std::int64_t>(first(min_x), 0));
    const int x_end = static_cast<int>(std::min<std::int64_t>(last(max_x), width - 1));
    const int y_begin = static_cast<int>(std::max<std::int64_t>(first(min_y), 0));
    const int y_end = static_cast<int>(std::min<std::int64_t>(last(max_y), height - 1));
    const double inv_area = 1.0 / static_cast<double>(area);

    for (int py = y_begin; py <= y_end; ++py) {
      for (int px = x_begin; px <= x_end; ++px) {
        const FixedPoint p{px * kSubpixel + kSubpixel / 2, py * kSubpixel + kSubpixel / 2};
        const std::int64_t e0 = Edge(v1, v2, p);
        const std::int64_t e1 = Edge(v2, v0, p);
        const std::int64_t e2 = Edge(v0, v1, p);
        if (e0 - bias0 < 0 || e1 - bias1 < 0 || e2 - bias2 < 0) continue;
        fn(px, py, static_cast<double>(e0) * inv_area, static_cast<double>(e1) * inv_area,
           static_cast<double>(e2) * inv_area, idx);
      }
    }
  }
}

Rgba SampleNearest(const ImageBuffer& tex, double u, double v) {
  const int x = std::clamp(static_cast<int>(std::floor(u * tex.width())), 0, tex.width() - 1);
  const int y = std::clamp(static_cast<int>(std::floor(v * tex.height())), 0, tex.height() - 1);
  return tex.at(x, y);
}

Rgba SampleBilinear(const ImageBuffer& tex, double u, double v) {
  const double sx = u * tex.width() - 0.5;
  const double sy = v * tex.height() - 0.5;
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  const double fx = sx - fx0;
  const double fy = sy - fy0;
  const int x0 = std::clamp(static_cast<int>(fx0), 0, tex.width() - 1);
  const int y0 = std::clamp(static_cast<int>(fy0), 0, tex.height() - 1);
  const int x1 = std::clamp(static_cast<int>(fx0) + 1, 0, tex.width() - 1);
  const int y1 = std::clamp(static_cast<int>(fy0) + 1, 0, tex.height() - 1);
  const std::uint8_t* p00 = tex.pixel(x0, y0);
  const std::uint8_t* p10 = tex.pixel(x1, y0);
  const std::uint8_t* p01 = tex.pixel(x0, y1);
  const std::uint8_t* p11 = tex.pixel(x1, y1);
  std::uint8_t out[4];
  for (int c = 0; c < 4; ++c) {
    const double top = p00[c] + (p10[c] - p00[c]) * fx;
    const double bottom = p01[c] + (p11[c] - p01[c]) * fx;
    out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(top + (bottom - top) * fy), 0L, 255L));
  }
  return {out[0], out[1], out[2], out[3]};
}

}  // namespace

Sampling ParseSampling(const std::string& name) {
  if (name == "nearest") return Sampling::kNearest;
  if (name == "bilinear") return Sampling::kBilinear;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown sampling '" + name + "' (expected nearest or bilinear)");
}

const char* SamplingName(Sampling sampling) {
  return sampling == Sampling::kNearest ? "nearest" : "bilinear";
}

Rgba BlendOver(Rgba src, Rgba dst) {
  const unsigned a = src.a;
  const unsigned ia = 255u - a;
  // (n + 127) / 255 rounds n / 255 to nearest; halves cannot occur.
  auto mix = [&](unsigned s, unsigned d) {
    return static_cast<std::uint8_t>((s * a + d * ia + 127u) / 255u);
  };
  return {mix(src.r, dst.r), mix(src.g, dst.g), mix(src.b, dst.b),
          static_cast<std::uint8_t>((a * 255u + dst.a * ia + 127u) / 255u)};
}

void RasterizeMesh(const Mesh& mesh, const ImageBuffer& texture, ImageBuffer& target,
                   Sampling sampling) {
  if (mesh.uvs.size() != mesh.vertices.size()) {
    throw Error(ErrorCode::kInvalidArgument, "mesh has mismatched uv and vertex counts");
  }
  for (const Vec2& uv : mesh.uvs) {
    if (!(uv.x >= 0.0 && uv.x <= 1.0 && uv.y >= 0.0 && uv.y <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "mesh uv outside [0, 1]");
    }
  }
  ForEachCoveredPixel(mesh, target.width(), target.height(),
                      [&](int px, int py, double w0, double w1, double w2,
                          const std::array<int, 3>& idx) {
                        const Vec2& a = mesh.uvs[static_cast<std::size_t>(idx[0])];
                        const Vec2& b = mesh.uvs[static_cast<std::size_t>(idx[1])];
                        const Vec2& c = mesh.uvs[static_cast<std::size_t>(idx[2])];
                        const double u = w0 * a.x + w1 * b.x + w2 * c.x;
                        const double v = w0 * a.y + w1 * b.y + w2 * c.y;
                        const Rgba src = sampling == Sampling::kNearest
                                             ? SampleNearest(texture, u, v)
                                             : SampleBilinear(texture, u, v);
                        if (src.a == 0) return;
                        target.set(px, py, src.a == 255 ? src : BlendOver(src, target.at(px, py)));
                      });
}

std::vector<int> CoverageCounts(const Mesh& mesh, int width, int height) {
  std::vector<int> counts(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  ForEachCoveredPixel(mesh, width, height,
                      [&](int px, int py, double, double, double, const std::array<int, 3>&) {
                        ++counts[static_cast<std::size_t>(py) * static_cast<std::size_t>(width) +
                                 static_cast<std::size_t>(px)];
                      });
  return counts;
}

JumpFrame Scene::jump_frame() const {
  return {{subject_box.x0 + subject_box.width / 2.0, subject_box.y0 + subject_box.height},
          subject_box.height};
}

Scene BuildScene(const ImageBuffer& image, const Mask& subject, const ImageBuffer& background,
                 MeshDensity density, Sampling sampling) {
  if (subject.width() != image.width() || subject.height() != image.height() ||
      background.width() != image.width() || background.height() != image.height()) {
    throw Error(ErrorCode::kInvalidArgument, "scene image, mask and background differ in size");
  }
  int x0 = image.width(), y0 = image.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < subject.height(); ++y) {
    for (int x = 0; x < subject.width(); ++x) {
      if (!subject.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw Error(ErrorCode::kInvalidArgument, "subject mask is empty");

  const double w = image.width();
  const double h = image.height();
  Scene scene{background, image, {}, {}, {}, sampling};
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      scene.subject_texture.pixel(x, y)[3] = subject.at(x, y) ? 255 : 0;
    }
  }
  scene.subject_box = {static_cast<double>(x0), static_cast<double>(y0),
                       static_cast<double>(x1 - x0 + 1), static_cast<double>(y1 - y0 + 1)};
  scene.background_mesh = MakeGridMesh({0.0, 0.0, w, h}, 2, 2);
  const Rect& box = scene.subject_box;
  scene.subject_rest_mesh =
      MakeGridMesh(box, density.nx, density.ny, {box.x0 / w, box.y0 / h, box.width / w, box.height / h});
  return scene;
}

Frame CompositeFrame(const Scene& scene, const Mesh& deformed_subject, int index) {
  if (deformed_subject.vertices.size() != scene.subject_rest_mesh.vertices.size() ||
      !deformed_subject.SameTopology(scene.subject_rest_mesh)) {
    throw Error(ErrorCode::kInvalidArgument, "deformed subject mesh topology differs from the rest mesh");
  }
  Frame frame{index, ImageBuffer(scene.background.width(), scene.background.height())};
  RasterizeMesh(scene.background_mesh, scene.background, frame.image, scene.sampling);
  RasterizeMesh(deformed_subject, scene.subject_texture, frame.image, scene.sampling);
  return frame;
}

std::vector<Frame> RenderAnimation(const Scene& scene, const Animation& animation) {
  const std::vector<Mesh> meshes = SampleTimeline(scene.subject_rest_mesh, animation, scene.jump_frame());
  std::vector<Frame> frames;
  frames.reserve(meshes.size());
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    frames.push_back(CompositeFrame(scene, meshes[i], static_cast<int>(i)));
  }
  return frames;
}

std::vector<std::filesystem::path> WriteFrameSequence(const std::vector<Frame>& frames,
                                                      const std::filesystem::path& dir,
                                                      const std::string& stem) {
  if (frames.size() >= 10000) {
    throw Error(ErrorCode::kOutOfRange, "frame index exceeds padding: " +
                                            std::to_string(frames.size()) + " frames");
  }
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> paths;
  paths.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "_%04zu.png", i);
    paths.push_back(dir / (stem + name));
    SaveImage(frames[i].image, paths.back());
  }
  return paths;
}

}  // namespace stillmotion
