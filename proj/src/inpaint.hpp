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

#include "image.hpp"

namespace stillmotion {

struct InpaintConfig {
  int pre_dilation = 3;
  double tolerance = 0.1;
  int max_iterations = 10000;
};

void ValidateInpaintConfig(const InpaintConfig& config);

struct InpaintResult {
  ImageBuffer image;
  // Largest |value - mean of 4-neighbours| over hole pixels and channels
  // when the solver stopped.
  double residual = 0.0;
  int iterations = 0;
  // False when the iteration budget ran out before both the residual and
  // the estimated distance to the exact solution fell to the tolerance.
  bool converged = true;
};

// Harmonic fill of the hole: every hole pixel ends up within `tolerance` of
// the mean of its in-bounds 4-neighbours, per channel, and within an
// estimated `tolerance` of the exact discrete solution. Solved with red-black
// Gauss-Seidel in double precision, rounded once at the end. Pixels outside
// the hole are copied bit-exactly. `pre_dilation` is not applied here.
InpaintResult InpaintDiffusion(const ImageBuffer& image, const Mask& hole,
                               const InpaintConfig& config = {});

// Dilates the subject by config.pre_dilation and fills the result.
InpaintResult MakeBackground(const ImageBuffer& image, const Mask& subject,
                             const InpaintConfig& config = {});

}  // namespace stillmotion
