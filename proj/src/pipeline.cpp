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

#include "pipeline.hpp"

#include <chrono>
#include <functional>
#include <set>
#include <sstream>

#include "error.hpp"
#include "image_io.hpp"
#include "json_io.hpp"

namespace stillmotion {

using nlohmann::json;

std::vector<Frame> AnimateSubject(const ImageBuffer& image, const Mask& mask,
                                  const ImageBuffer& plate, const Animation& animation,
                                  const RenderSettings& settings) {
  const Scene scene = BuildScene(image, mask, plate, settings.mesh, settings.sampling);
  return RenderAnimation(scene, animation);
}

Frame PreviewFrame(const ImageBuffer& image, const Mask& mask, const ImageBuffer& plate,
                   const Animation& animation, const RenderSettings& settings, double t) {
  ValidateAnimation(animation);
  const Scene scene = BuildScene(image, mask, plate, settings.mesh, settings.sampling);
  return CompositeFrame(scene, DeformAt(scene.subject_rest_mesh, animation, t, scene.jump_frame()));
}

std::vector<std::uint8_t> RenderGif(const ImageBuffer& image, const Mask& mask,
                                    const ImageBuffer& plate, const Animation& animation,
                                    const RenderSettings& settings) {
  return EncodeGif(AnimateSubject(image, mask, plate, animation, settings), animation.FrameDelay());
}

namespace {

// Runs `fn`, appending its message to `errors` instead of throwing.
void Collect(std::vector<std::string>& errors, const std::string& where,
             const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    errors.push_back(where + ": " + e.what());
  } catch (const json::exception& e) {
    errors.push_back(where + ": " + e.what());
  }
}

void RejectUnknown(const json& obj, const std::set<std::string>& known, const std::string& where,
                   std::vector<std::string>& errors) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) errors.push_back(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T Get(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kValidation, std::string("field '") + key + "' has the wrong type");
  }
}

std::string StringField(const json& obj, const char* key) {
  if (!obj.at(key).is_string()) {
    throw Error(ErrorCode::kValidation, std::string("field '") + key + "' must be a string");
  }
  return obj.at(key).get<std::string>();
}

int IntField(const json& obj, const char* key, int lo, int hi) {
  if (!obj.at(key).is_number_integer()) {
    throw Error(ErrorCode::kValidation, std::string("field '") + key + "' must be an integer");
  }
  const long long v = obj.at(key).get<long long>();
  if (v < lo || v > hi) {
    throw Error(ErrorCode::kValidation, std::string("field '") + key + "' must lie in [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

template <typename Fn>
double Timed(std::vector<std::pair<std::string, double>>& timings, const std::string& name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  timings.emplace_back(name, ms);
  return ms;
}

template <typename Fn>
void InStage(const char* stage, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
}

void EnsureOutputDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + dir.string());
  }
}

ImageBuffer LoadArtifact(const std::filesystem::path& path, const char* name) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kState, std::string("missing artifact: ") + name + " (" + path.string() + ")");
  }
  return LoadImage(path);
}

ClickSet LoadClicks(const PipelineConfig& config) {
  if (!config.clicks_path) return config.clicks;
  const auto bytes = ReadFileBytes(*config.clicks_path);
  return ClickSetFromJson(ParseJson(std::string(bytes.begin(), bytes.end())));
}

void RunSegment(const PipelineConfig& config, const ImageBuffer& image, Mask& mask, RunReport& report) {
  InStage("segment", [&] {
    const ClickSet clicks = LoadClicks(config);
    Timed(report.timings_ms, "segment", [&] { mask = SegmentSubject(image, clicks, config.segmentation).mask; });
    report.mask_area = mask.count();
    EnsureOutputDir(config.output_dir);
    SaveImage(MaskToImage(mask), config.MaskPath());
    report.outputs.push_back(config.MaskPath());
  });
}

void RunInpaint(const PipelineConfig& config, const ImageBuffer& image, const Mask& mask,
                std::optional<ImageBuffer>& plate, RunReport& report) {
  InStage("inpaint", [&] {
    Timed(report.timings_ms, "inpaint", [&] {
      InpaintResult r = MakeBackground(image, mask, config.inpaint);
      report.inpaint_residual = r.residual;
      report.inpaint_iterations = r.iterations;
      report.inpaint_converged = r.converged;
      plate = std::move(r.image);
    });
    EnsureOutputDir(config.output_dir);
    SaveImage(*plate, config.BackgroundPath());
    report.outputs.push_back(config.BackgroundPath());
  });
}

void RunAnimate(const PipelineConfig& config, const ImageBuffer& image, const Mask& mask,
                const ImageBuffer& plate, RunReport& report) {
  InStage("animate", [&] {
    std::vector<Frame> frames;
    Timed(report.timings_ms, "render", [&] {
      frames = AnimateSubject(image, mask, plate, config.animation, config.render);
    });
    std::vector<std::uint8_t> gif;
    report.delay_cs = config.animation.FrameDelay();
    Timed(report.timings_ms, "encode", [&] { gif = EncodeGif(frames, report.delay_cs); });
    report.frame_count = static_cast<int>(frames.size());
    const auto gif_path = config.GifPath();
    if (gif_path.has_parent_path()) EnsureOutputDir(gif_path.parent_path());
    WriteFileBytes(gif_path, gif);
    report.outputs.push_back(gif_path);
    if (config.frames_dir) {
      EnsureOutputDir(*config.frames_dir);
      for (auto& p : WriteFrameSequence(frames, *config.frames_dir, config.frame_stem)) {
        report.outputs.push_back(std::move(p));
      }
    }
  });
}

void WriteReport(const PipelineConfig& config, const RunReport& report) {
  if (!config.report_path) return;
  const std::string text = report.ToJson().dump(2) + "\n";
  WriteFileBytes(*config.report_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace

PipelineConfig PipelineConfigFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kValidation, "config must be a JSON object");
  PipelineConfig cfg;
  std::vector<std::string> errors;
  RejectUnknown(doc, {"input", "clicks", "segmentation", "inpaint", "animation", "sampling", "mesh", "output"},
                "config", errors);

  if (!doc.contains("input")) {
    errors.push_back("input: required");
  } else {
    Collect(errors, "input", [&] {
      cfg.input = StringField(doc, "input");
      if (!std::filesystem::is_regular_file(cfg.input)) {
        throw Error(ErrorCode::kValidation, "file not found: " + cfg.input.string());
      }
    });
  }

  if (!doc.contains("clicks")) {
    errors.push_back("clicks: required (path to a click file or an inline click set)");
  } else {
    Collect(errors, "clicks", [&] {
      const json& c = doc["clicks"];
      if (c.is_string()) {
        cfg.clicks_path = c.get<std::string>();
        if (!std::filesystem::is_regular_file(*cfg.clicks_path)) {
          throw Error(ErrorCode::kValidation, "file not found: " + cfg.clicks_path->string());
        }
        const auto bytes = ReadFileBytes(*cfg.clicks_path);
        cfg.clicks = ClickSetFromJson(ParseJson(std::string(bytes.begin(), bytes.end())));
      } else {
        cfg.clicks = ClickSetFromJson(c);
      }
      if (cfg.clicks.positives.empty()) {
        throw Error(ErrorCode::kValidation, "at least one positive click is required");
      }
    });
  }

  if (doc.contains("segmentation")) {
    const json& s = doc["segmentation"];
    if (!s.is_object()) {
      errors.push_back("segmentation: must be an object");
    } else {
      RejectUnknown(s, {"k", "seed", "weights", "closing_radius", "policy", "merge_threshold"},
                    "segmentation", errors);
      auto& p = cfg.segmentation;
      if (s.contains("k")) Collect(errors, "segmentation.k", [&] { p.k = IntField(s, "k", 1, 64); });
      if (s.contains("seed")) {
        Collect(errors, "segmentation.seed", [&] {
          const json& seed = s["seed"];
          if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
            throw Error(ErrorCode::kValidation, "must be a non-negative integer");
          }
          p.seed = s["seed"].get<std::uint64_t>();
        });
      }
      if (s.contains("weights")) {
        Collect(errors, "segmentation.weights", [&] {
          const json& w = s["weights"];
          if (!w.is_array() || w.size() != kFeatureDims) {
            throw Error(ErrorCode::kValidation, "must be an array of 5 positive numbers");
          }
          for (int d = 0; d < kFeatureDims; ++d) {
            if (!w[static_cast<std::size_t>(d)].is_number() || !(w[static_cast<std::size_t>(d)].get<double>() > 0.0)) {
              throw Error(ErrorCode::kValidation, "must be an array of 5 positive numbers");
            }
            p.weights[d] = w[static_cast<std::size_t>(d)].get<double>();
          }
        });
      }
      if (s.contains("closing_radius")) {
        Collect(errors, "segmentation.closing_radius", [&] { p.closing_radius = IntField(s, "closing_radius", 0, 64); });
      }
      if (s.contains("policy")) {
        Collect(errors, "segmentation.policy", [&] { p.policy = ParseComponentPolicy(StringField(s, "policy")); });
      }
      if (s.contains("merge_threshold") && !s["merge_threshold"].is_null()) {
        Collect(errors, "segmentation.merge_threshold", [&] {
          const double v = Get<double>(s, "merge_threshold");
          if (!(v >= 0.0)) throw Error(ErrorCode::kValidation, "must be >= 0");
          p.merge_threshold = v;
        });
      }
    }
  }

  if (doc.contains("inpaint")) {
    const json& s = doc["inpaint"];
    if (!s.is_object()) {
      errors.push_back("inpaint: must be an object");
    } else {
      RejectUnknown(s, {"dilation", "tolerance", "iterations"}, "inpaint", errors);
      if (s.contains("dilation")) {
        Collect(errors, "inpaint.dilation", [&] { cfg.inpaint.pre_dilation = IntField(s, "dilation", 0, 256); });
      }
      if (s.contains("tolerance")) {
        Collect(errors, "inpaint.tolerance", [&] {
          const double v = Get<double>(s, "tolerance");
          if (!(v > 0.0)) throw Error(ErrorCode::kValidation, "must be > 0");
          cfg.inpaint.tolerance = v;
        });
      }
      if (s.contains("iterations")) {
        Collect(errors, "inpaint.iterations", [&] {
          cfg.inpaint.max_iterations = IntField(s, "iterations", 1, 10'000'000);
        });
      }
    }
  }

  if (doc.contains("animation")) {
    Collect(errors, "animation", [&] { cfg.animation = AnimationFromJson(doc["animation"]); });
  }
  if (doc.contains("sampling")) {
    Collect(errors, "sampling", [&] { cfg.render.sampling = ParseSampling(StringField(doc, "sampling")); });
  }
  if (doc.contains("mesh")) {
    const json& s = doc["mesh"];
    if (!s.is_object()) {
      errors.push_back("mesh: must be an object");
    } else {
      RejectUnknown(s, {"nx", "ny"}, "mesh", errors);
      if (s.contains("nx")) Collect(errors, "mesh.nx", [&] { cfg.render.mesh.nx = IntField(s, "nx", 1, 512); });
      if (s.contains("ny")) Collect(errors, "mesh.ny", [&] { cfg.render.mesh.ny = IntField(s, "ny", 1, 512); });
    }
  }
  if (doc.contains("output")) {
    const json& s = doc["output"];
    if (!s.is_object()) {
      errors.push_back("output: must be an object");
    } else {
      RejectUnknown(s, {"dir", "gif", "frames_dir", "stem", "report"}, "output", errors);
      if (s.contains("dir")) Collect(errors, "output.dir", [&] { cfg.output_dir = StringField(s, "dir"); });
      if (s.contains("gif")) Collect(errors, "output.gif", [&] { cfg.gif_path = StringField(s, "gif"); });
      if (s.contains("frames_dir")) {
        Collect(errors, "output.frames_dir", [&] { cfg.frames_dir = StringField(s, "frames_dir"); });
      }
      if (s.contains("stem")) {
        Collect(errors, "output.stem", [&] {
          cfg.frame_stem = StringField(s, "stem");
          if (cfg.frame_stem.empty() || cfg.frame_stem.find('/') != std::string::npos) {
            throw Error(ErrorCode::kValidation, "must be a non-empty file name stem");
          }
        });
      }
      if (s.contains("report")) Collect(errors, "output.report", [&] { cfg.report_path = StringField(s, "report"); });
    }
  }

  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "invalid config (" << errors.size() << (errors.size() == 1 ? " problem" : " problems") << ")";
    for (const auto& e : errors) msg << "\n  " << e;
    throw Error(ErrorCode::kValidation, msg.str());
  }
  return cfg;
}

Stage ParseStage(const std::string& name) {
  if (name == "segment") return Stage::kSegment;
  if (name == "inpaint") return Stage::kInpaint;
  if (name == "animate") return Stage::kAnimate;
  throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + name + "' (expected segment, inpaint or animate)");
}

const char* StageName(Stage stage) {
  switch (stage) {
    case Stage::kSegment: return "segment";
    case Stage::kInpaint: return "inpaint";
    case Stage::kAnimate: return "animate";
  }
  return "segment";
}

json RunReport::ToJson() const {
  json timings = json::object();
  for (const auto& [name, ms] : timings_ms) timings[name] = ms;
  json out_paths = json::array();
  for (const auto& p : outputs) out_paths.push_back(p.string());
  json inpaint = nullptr;
  if (inpaint_residual) {
    inpaint = {{"residual", *inpaint_residual},
               {"iterations", inpaint_iterations.value_or(0)},
               {"converged", inpaint_converged.value_or(false)}};
  }
  return {{"mask_area", mask_area}, {"inpaint", inpaint}, {"frames", frame_count},
          {"delay_cs", delay_cs},   {"timings_ms", timings}, {"outputs", out_paths}};
}

RunReport RunPipeline(const PipelineConfig& config) {
  RunReport report;
  std::optional<ImageBuffer> image;
  InStage("load", [&] { image = LoadImage(config.input); });
  Mask mask(image->width(), image->height());
  RunSegment(config, *image, mask, report);
  std::optional<ImageBuffer> plate;
  RunInpaint(config, *image, mask, plate, report);
  RunAnimate(config, *image, mask, *plate, report);
  WriteReport(config, report);
  return report;
}

RunReport RunStage(const PipelineConfig& config, Stage stage) {
  RunReport report;
  std::optional<ImageBuffer> image;
  InStage("load", [&] { image = LoadImage(config.input); });
  switch (stage) {
    case Stage::kSegment: {
      Mask mask(image->width(), image->height());
      RunSegment(config, *image, mask, report);
      break;
    }
    case Stage::kInpaint: {
      std::optional<Mask> mask;
      InStage("inpaint", [&] { mask = ImageToMask(LoadArtifact(config.MaskPath(), "mask")); });
      report.mask_area = mask->count();
      std::optional<ImageBuffer> plate;
      RunInpaint(config, *image, *mask, plate, report);
      break;
    }
    case Stage::kAnimate: {
      std::optional<Mask> mask;
      std::optional<ImageBuffer> plate;
      InStage("animate", [&] {
        mask = ImageToMask(LoadArtifact(config.MaskPath(), "mask"));
        plate = LoadArtifact(config.BackgroundPath(), "background");
      });
      report.mask_area = mask->count();
      RunAnimate(config, *image, *mask, *plate, report);
      break;
    }
  }
  WriteReport(config, report);
  return report;
}

}  // namespace stillmotion
