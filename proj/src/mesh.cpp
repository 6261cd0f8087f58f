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

#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace stillmotion {

namespace {

bool Finite(double v) { return std::isfinite(v); }

}  // namespace

Rect Mesh::Bounds() const {
  if (vertices.empty()) return {};
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const Vec2& v : vertices) {
    x0 = std::min(x0, v.x);
    y0 = std::min(y0, v.y);
    x1 = std::max(x1, v.x);
    y1 = std::max(y1, v.y);
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

double SignedArea2(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Vec2 a = mesh.vertices[static_cast<std::size_t>(tri[0])];
  const Vec2 b = mesh.vertices[static_cast<std::size_t>(tri[1])];
  const Vec2 c = mesh.vertices[static_cast<std::size_t>(tri[2])];
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

Mesh MakeGridMesh(const Rect& rect, int nx, int ny, const Rect& uv_window) {
  if (nx < 1 || ny < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid mesh needs nx >= 1 and ny >= 1, got " + std::to_string(nx) + "x" +
                    std::to_string(ny));
  }
  if (!(rect.width > 0.0) || !(rect.height > 0.0) || !Finite(rect.x0) || !Finite(rect.y0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid mesh rectangle must have positive size");
  }
  if (uv_window.x0 < 0.0 || uv_window.y0 < 0.0 || !(uv_window.width > 0.0) ||
      !(uv_window.height > 0.0) || uv_window.x0 + uv_window.width > 1.0 ||
      uv_window.y0 + uv_window.height > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "uv window must lie inside [0, 1]^2");
  }
  Mesh mesh;
  const int stride = nx + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(stride * (ny + 1)));
  mesh.uvs.reserve(mesh.vertices.capacity());
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double fu = static_cast<double>(i) / nx;
      const double fv = static_cast<double>(j) / ny;
      mesh.vertices.push_back({rect.x0 + i * rect.width / nx, rect.y0 + j * rect.height / ny});
      mesh.uvs.push_back({i == nx ? uv_window.x0 + uv_window.width : uv_window.x0 + fu * uv_window.width,
                          j == ny ? uv_window.y0 + uv_window.height : uv_window.y0 + fv * uv_window.height});
    }
  }
  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * stride + i;
      const int b = a + 1;
      const int c = a + stride;
      const int d = c + 1;
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({b, d, c});
    }
  }
  return mesh;
}

void ValidateWaveParams(const WaveParams& params) {
  if (!Finite(params.amplitude) || params.amplitude < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "wave amplitude must be >= 0");
  }
  if (!Finite(params.wave_count) || !(params.wave_count > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "wave count must be > 0");
  }
  if (!Finite(params.speed) || !Finite(params.phase0)) {
    throw Error(ErrorCode::kInvalidArgument, "wave speed and phase must be finite");
  }
}

namespace {

// Displaces `moved` by a sine of the normalized `travel` coordinate.
Mesh Wave(const Mesh& rest, const WaveParams& params, double t, bool horizontal) {
  ValidateWaveParams(params);
  const Rect b = rest.Bounds();
  const double extent = horizontal ? b.height : b.width;
  const double origin = horizontal ? b.y0 : b.x0;
  if (!(extent > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                horizontal ? "horizontal wave needs a mesh of positive height"
                           : "vertical wave needs a mesh of positive width");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double time_phase = params.phase0 + kTwoPi * params.speed * t;
  Mesh out = rest;
  for (Vec2& v : out.vertices) {
    const double travel = horizontal ? v.y : v.x;
    const double offset =
        params.amplitude * std::sin(kTwoPi * params.wave_count * (travel - origin) / extent + time_phase);
    (horizontal ? v.x : v.y) += offset;
  }
  return out;
}

}  // namespace

Mesh HorizontalWave(const Mesh& rest, const WaveParams& params, double t) {
  return Wave(rest, params, t, true);
}

Mesh VerticalWave(const Mesh& rest, const WaveParams& params, double t) {
  return Wave(rest, params, t, false);
}

JumpTimeline DefaultJumpTimeline() {
  return {{
      {0.00, {1.00, 1.00, 0.00}},
      {0.15, {1.10, 0.90, 0.00}},
      {0.45, {0.90, 1.10, 0.50}},
      {0.70, {1.05, 0.95, 0.00}},
      {0.85, {1.00, 1.00, 0.02}},
      {1.00, {1.00, 1.00, 0.00}},
  }};
}

void ValidateTimeline(const JumpTimeline& timeline) {
  const auto& kf = timeline.keyframes;
  if (kf.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "jump timeline needs at least two keyframes");
  }
  if (kf.front().time != 0.0 || kf.back().time != 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "jump timeline must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < kf.size(); ++i) {
    if (!(kf[i].time > kf[i - 1].time)) {
      throw Error(ErrorCode::kInvalidArgument, "jump keyframe times must strictly increase");
    }
  }
  for (const Keyframe& k : kf) {
    if (!(k.pose.scale_x > 0.0) || !(k.pose.scale_y > 0.0) || !Finite(k.pose.scale_x) ||
        !Finite(k.pose.scale_y) || !Finite(k.pose.translate_y)) {
      throw Error(ErrorCode::kInvalidArgument, "jump keyframe scales must be positive and finite");
    }
  }
  const PoseParams rest{};
  if (kf.front().pose != rest || kf.back().pose != rest) {
    throw Error(ErrorCode::kInvalidArgument, "jump timeline must begin and end at the rest pose");
  }
}

PoseParams JumpPose(const JumpTimeline& timeline, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "jump time must lie in [0, 1], got " + std::to_string(t));
  }
  ValidateTimeline(timeline);
  const auto& kf = timeline.keyframes;
  std::size_t i = 0;
  while (i + 1 < kf.size() && kf[i + 1].time <= t) ++i;
  if (kf[i].time == t || i + 1 == kf.size()) return kf[i].pose;
  const Keyframe& a = kf[i];
  const Keyframe& b = kf[i + 1];
  const double s = (t - a.time) / (b.time - a.time);
  auto lerp = [s](double p, double q) { return p + (q - p) * s; };
  return {lerp(a.pose.scale_x, b.pose.scale_x), lerp(a.pose.scale_y, b.pose.scale_y),
          lerp(a.pose.translate_y, b.pose.translate_y)};
}

Mesh ApplyPose(const Mesh& rest, const PoseParams& pose, Vec2 anchor, double subject_height) {
  if (!(subject_height > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "subject height must be positive");
  }
  if (!(pose.scale_x > 0.0) || !(pose.scale_y > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pose scales must be positive");
  }
  // Written as offsets so the rest pose is exactly the identity.
  const double lift = pose.translate_y * subject_height;
  Mesh out = rest;
  for (Vec2& v : out.vertices) {
    v.x += (pose.scale_x - 1.0) * (v.x - anchor.x);
    v.y += (pose.scale_y - 1.0) * (v.y - anchor.y);
    v.y -= lift;
  }
  return out;
}

AnimationKind ParseAnimationKind(const std::string& name) {
  if (name == "hwave") return AnimationKind::kHorizontalWave;
  if (name == "vwave") return AnimationKind::kVerticalWave;
  if (name == "jump") return AnimationKind::kJump;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown animation kind '" + name + "' (expected hwave, vwave or jump)");
}

const char* AnimationKindName(AnimationKind kind) {
  switch (kind) {
    case AnimationKind::kHorizontalWave: return "hwave";
    case AnimationKind::kVerticalWave: return "vwave";
    case AnimationKind::kJump: return "jump";
  }
  return "jump";
}

int Animation::FrameDelay() const {
  if (delay_cs) return *delay_cs;
  const double per_frame = 100.0 * duration / std::max(frames, 1);
  return std::max(1, static_cast<int>(std::lround(per_frame)));
}

void ValidateAnimation(const Animation& animation) {
  if (animation.frames < 1) {
    throw Error(ErrorCode::kInvalidArgument, "animation needs at least one frame");
  }
  if (!Finite(animation.duration) || !(animation.duration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "animation duration must be > 0");
  }
  if (animation.delay_cs && (*animation.delay_cs < 1 || *animation.delay_cs > 65535)) {
    throw Error(ErrorCode::kInvalidArgument, "frame delay must lie in [1, 65535] centiseconds");
  }
  ValidateWaveParams(animation.wave);
  ValidateTimeline(animation.timeline);
}

Mesh DeformAt(const Mesh& rest, const Animation& animation, double t, const JumpFrame& jump) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "clip time must lie in [0, 1], got " + std::to_string(t));
  }
  switch (animation.kind) {
    case AnimationKind::kHorizontalWave:
      return HorizontalWave(rest, animation.wave, t * animation.duration);
    case AnimationKind::kVerticalWave:
      return VerticalWave(rest, animation.wave, t * animation.duration);
    case AnimationKind::kJump:
      return ApplyPose(rest, JumpPose(animation.timeline, t), jump.anchor, jump.subject_height);
  }
  return rest;
}

double FrameFraction(int index, int frame_count) {
  if (frame_count <= 1) return 0.0;
  return static_cast<double>(index) / static_cast<double>(frame_count - 1);
}

std::vector<Mesh> SampleTimeline(const Mesh& rest, const Animation& animation,
                                 const JumpFrame& jump) {
  ValidateAnimation(animation);
  std::vector<Mesh> out;
  out.reserve(static_cast<std::size_t>(animation.frames));
  for (int i = 0; i < animation.frames; ++i) {
    out.push_back(DeformAt(rest, animation, FrameFraction(i, animation.frames), jump));
  }
  return out;
}

}  // namespace stillmotion
