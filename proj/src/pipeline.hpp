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

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gif.hpp"
#include "inpaint.hpp"
#include "mesh.hpp"
#include "render.hpp"
#include "segmentation.hpp"

namespace stillmotion {

struct RenderSettings {
  MeshDensity mesh;
  Sampling sampling = Sampling::kBilinear;
};

// The compute paths shared by the command line and the HTTP service.
std::vector<Frame> AnimateSubject(const ImageBuffer& image, const Mask& mask,
                                  const ImageBuffer& plate, const Animation& animation,
                                  const RenderSettings& settings);
Frame PreviewFrame(const ImageBuffer& image, const Mask& mask, const ImageBuffer& plate,
                   const Animation& animation, const RenderSettings& settings, double t);
std::vector<std::uint8_t> RenderGif(const ImageBuffer& image, const Mask& mask,
                                    const ImageBuffer& plate, const Animation& animation,
                                    const RenderSettings& settings);

struct PipelineConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> clicks_path;
  ClickSet clicks;
  SegmentParams segmentation;
  InpaintConfig inpaint;
  Animation animation;
  RenderSettings render;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> gif_path;
  std::optional<std::filesystem::path> frames_dir;
  std::string frame_stem = "frame";
  std::optional<std::filesystem::path> report_path;

  std::filesystem::path MaskPath() const { return output_dir / "mask.png"; }
  std::filesystem::path BackgroundPath() const { return output_dir / "background.png"; }
  std::filesystem::path GifPath() const { return gif_path ? *gif_path : output_dir / "animation.gif"; }
};

// Parses and validates a config document. Every problem found is reported
// at once in a single kValidation error, one per line. Referenced input and
// click files must exist.
PipelineConfig PipelineConfigFromJson(const nlohmann::json& doc);

enum class Stage { kSegment, kInpaint, kAnimate };

Stage ParseStage(const std::string& name);
const char* StageName(Stage stage);

struct RunReport {
  std::size_t mask_area = 0;
  std::optional<double> inpaint_residual;
  std::optional<int> inpaint_iterations;
  std::optional<bool> inpaint_converged;
  int frame_count = 0;
  int delay_cs = 0;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::filesystem::path> outputs;

  nlohmann::json ToJson() const;
};

// segment -> inpaint -> mesh/animate -> render -> encode, writing mask.png,
// background.png and the GIF (plus optional PNG frames). Stage failures are
// rethrown with the stage name prefixed.
RunReport RunPipeline(const PipelineConfig& config);

// One stage, reading upstream artifacts from the output directory.
RunReport RunStage(const PipelineConfig& config, Stage stage);

}  // namespace stillmotion
