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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "image.hpp"
#include "mesh.hpp"

namespace stillmotion {

enum class Sampling { kNearest, kBilinear };

Sampling ParseSampling(const std::string& name);
const char* SamplingName(Sampling sampling);

// Draws every triangle whose interior covers a pixel centre, interpolating
// uvs barycentrically and blending the texture sample source-over onto the
// target. Vertices are snapped to 1/256 pixel and coverage uses exact integer
// edge functions with a top-left rule, so pixels on shared edges belong to
// exactly one triangle.
void RasterizeMesh(const Mesh& mesh, const ImageBuffer& texture, ImageBuffer& target,
                   Sampling sampling = Sampling::kNearest);

// Number of triangles covering each pixel centre (diagnostic for the fill
// rule).
std::vector<int> CoverageCounts(const Mesh& mesh, int width, int height);

// round(src * a + dst * (1 - a)) per channel with a = src alpha / 255.
Rgba BlendOver(Rgba src, Rgba dst);

struct Scene {
  ImageBuffer background;       // inpainted plate
  ImageBuffer subject_texture;  // source pixels, alpha 255 inside the mask
  Mesh background_mesh;
  Mesh subject_rest_mesh;
  Rect subject_box;             // pixel bounding box of the mask
  Sampling sampling = Sampling::kNearest;

  JumpFrame jump_frame() const;
};

struct MeshDensity {
  int nx = 24;
  int ny = 24;
};

// Subject mesh spans the mask's bounding box, background mesh the whole
// image at 2x2 cells. Throws kInvalidArgument for an empty mask.
Scene BuildScene(const ImageBuffer& image, const Mask& subject, const ImageBuffer& background,
                 MeshDensity density = {}, Sampling sampling = Sampling::kNearest);

struct Frame {
  int index = 0;
  ImageBuffer image;
};

// Background mesh onto a transparent canvas, then the deformed subject over it.
Frame CompositeFrame(const Scene& scene, const Mesh& deformed_subject, int index = 0);

std::vector<Frame> RenderAnimation(const Scene& scene, const Animation& animation);

// Writes <stem>_0000.png ... ; at most 9999 frames fit the padding.
std::vector<std::filesystem::path> WriteFrameSequence(const std::vector<Frame>& frames,
                                                      const std::filesystem::path& dir,
                                                      const std::string& stem);

}  // namespace stillmotion
