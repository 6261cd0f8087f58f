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
#include <optional>
#include <string>
#include <vector>

namespace stillmotion {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double width = 0.0;
  double height = 0.0;
};

// Vertex positions are in image pixel coordinates (x right, y down); uvs in
// [0, 1]^2 address the mesh texture.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Vec2> uvs;
  std::vector<std::array<int, 3>> triangles;

  bool SameTopology(const Mesh& other) const {
    return uvs == other.uvs && triangles == other.triangles;
  }
  Rect Bounds() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

// Twice the signed area of triangle t; positive for the winding produced by
// MakeGridMesh (x right, y down).
double SignedArea2(const Mesh& mesh, std::size_t t);

// Regular (nx+1) x (ny+1) vertex grid over `rect`, two triangles per cell.
// Vertex (i, j) gets uv (i/nx, j/ny) remapped into `uv_window`, which
// defaults to the unit square.
Mesh MakeGridMesh(const Rect& rect, int nx, int ny,
                  const Rect& uv_window = {0.0, 0.0, 1.0, 1.0});

struct WaveParams {
  double amplitude = 6.0;   // pixels
  double wave_count = 1.0;  // full periods across the travel axis
  double speed = 1.0;       // periods per second
  double phase0 = 0.0;      // radians
};

void ValidateWaveParams(const WaveParams& params);

// Sine travelling down the mesh; displaces x only:
//   x' = x + A sin(2 pi n (y - y_min) / H + phase0 + 2 pi speed t)
Mesh HorizontalWave(const Mesh& rest, const WaveParams& params, double t);
// Mirror image of HorizontalWave: travels along x, displaces y.
Mesh VerticalWave(const Mesh& rest, const WaveParams& params, double t);

struct PoseParams {
  double scale_x = 1.0;
  double scale_y = 1.0;
  double translate_y = 0.0;  // fraction of subject height, positive is up

  friend bool operator==(const PoseParams&, const PoseParams&) = default;
};

struct Keyframe {
  double time = 0.0;  // fraction of the clip
  PoseParams pose;

  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

struct JumpTimeline {
  std::vector<Keyframe> keyframes;
};

// Rest, crouch, peak, landing squash, small bounce, rest.
JumpTimeline DefaultJumpTimeline();
void ValidateTimeline(const JumpTimeline& timeline);

// Component-wise linear interpolation between the bracketing keyframes.
PoseParams JumpPose(const JumpTimeline& timeline, double t);

// Scales about `anchor`, then lifts by translate_y * subject_height.
Mesh ApplyPose(const Mesh& rest, const PoseParams& pose, Vec2 anchor, double subject_height);

enum class AnimationKind { kHorizontalWave, kVerticalWave, kJump };

AnimationKind ParseAnimationKind(const std::string& name);
const char* AnimationKindName(AnimationKind kind);

struct Animation {
  AnimationKind kind = AnimationKind::kJump;
  WaveParams wave;
  JumpTimeline timeline = DefaultJumpTimeline();
  int frames = 24;
  double duration = 2.0;          // seconds
  std::optional<int> delay_cs;    // GIF frame delay; derived when absent

  int FrameDelay() const;
};

void ValidateAnimation(const Animation& animation);

// Where the jump scales from and how far "one subject height" is.
struct JumpFrame {
  Vec2 anchor;
  double subject_height = 1.0;
};

// Deformed mesh at clip fraction `t` in [0, 1]; waves run at t * duration
// seconds.
Mesh DeformAt(const Mesh& rest, const Animation& animation, double t, const JumpFrame& jump);

// Frame i uses t = i / (frames - 1); a single frame uses t = 0.
double FrameFraction(int index, int frame_count);
std::vector<Mesh> SampleTimeline(const Mesh& rest, const Animation& animation,
                                 const JumpFrame& jump);

}  // namespace stillmotion
