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

// Command-line front end. Talks to the engine only through the C API.

#include <pthread.h>

#include <CLI11.hpp>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "stillmotion/stillmotion.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitStage = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::string> input, clicks, out_dir, gif, frames_dir, report, kind, policy, sampling;
  std::optional<int> frames, delay, k, closing_radius, dilation, iterations, nx, ny;
  std::optional<double> duration, amplitude, waves, speed, phase0, tolerance, merge_threshold;
  std::optional<std::uint64_t> seed;
};

void AddPipelineOptions(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "Pipeline config JSON");
  cmd->add_option("--input", o.input, "Input image (PNG or PPM)");
  cmd->add_option("--clicks", o.clicks, "Click set JSON file");
  cmd->add_option("--out-dir", o.out_dir, "Artifact directory (mask.png, background.png, animation.gif)");
  cmd->add_option("--out", o.gif, "GIF output path");
  cmd->add_option("--frames-dir", o.frames_dir, "Also write PNG frames here");
  cmd->add_option("--report", o.report, "Write the run report JSON here");
  cmd->add_option("--kind", o.kind, "Animation: hwave, vwave or jump");
  cmd->add_option("--frames", o.frames, "Frame count");
  cmd->add_option("--duration", o.duration, "Clip length in seconds");
  cmd->add_option("--delay", o.delay, "GIF frame delay in centiseconds");
  cmd->add_option("--amplitude", o.amplitude, "Wave amplitude in pixels");
  cmd->add_option("--waves", o.waves, "Sine periods across the subject");
  cmd->add_option("--speed", o.speed, "Wave speed in periods per second");
  cmd->add_option("--phase0", o.phase0, "Wave phase offset in radians");
  cmd->add_option("--k", o.k, "Initial k-means cluster count");
  cmd->add_option("--seed", o.seed, "k-means seed");
  cmd->add_option("--merge-threshold", o.merge_threshold, "Cluster merge distance");
  cmd->add_option("--closing-radius", o.closing_radius, "Mask closing radius in pixels");
  cmd->add_option("--policy", o.policy, "Component policy: all, largest or clicked");
  cmd->add_option("--inpaint-dilation", o.dilation, "Pixels to grow the hole before filling");
  cmd->add_option("--inpaint-tol", o.tolerance, "Harmonic fill residual tolerance");
  cmd->add_option("--inpaint-iters", o.iterations, "Harmonic fill iteration budget");
  cmd->add_option("--sampling", o.sampling, "Texture sampling: nearest or bilinear");
  cmd->add_option("--mesh-nx", o.nx, "Subject mesh columns");
  cmd->add_option("--mesh-ny", o.ny, "Subject mesh rows");
}

nlohmann::json OverridePatch(const Overrides& o) {
  nlohmann::json patch = nlohmann::json::object();
  auto set = [&](const char* section, const char* key, const auto& value) {
    if (!value) return;
    if (section) {
      patch[section][key] = *value;
    } else {
      patch[key] = *value;
    }
  };
  set(nullptr, "input", o.input);
  set(nullptr, "clicks", o.clicks);
  set(nullptr, "sampling", o.sampling);
  set("output", "dir", o.out_dir);
  set("output", "gif", o.gif);
  set("output", "frames_dir", o.frames_dir);
  set("output", "report", o.report);
  set("animation", "kind", o.kind);
  set("animation", "frames", o.frames);
  set("animation", "duration", o.duration);
  set("animation", "delay", o.delay);
  set("animation", "amplitude", o.amplitude);
  set("animation", "waves", o.waves);
  set("animation", "speed", o.speed);
  set("animation", "phase0", o.phase0);
  set("segmentation", "k", o.k);
  set("segmentation", "seed", o.seed);
  set("segmentation", "merge_threshold", o.merge_threshold);
  set("segmentation", "closing_radius", o.closing_radius);
  set("segmentation", "policy", o.policy);
  set("inpaint", "dilation", o.dilation);
  set("inpaint", "tolerance", o.tolerance);
  set("inpaint", "iterations", o.iterations);
  set("mesh", "nx", o.nx);
  set("mesh", "ny", o.ny);
  return patch;
}

int Report(sm_status status) {
  std::cerr << "stillmotion: " << sm_last_error() << "\n";
  return status == SM_ERR_VALIDATION ? kExitValidation : kExitStage;
}

int RunPipeline(const Overrides& o, const std::optional<std::string>& stage) {
  sm_config* config = nullptr;
  sm_status st = o.config_path.empty() ? sm_config_parse("{}", &config)
                                       : sm_config_load(o.config_path.c_str(), &config);
  if (st != SM_OK) return Report(st);
  st = sm_config_merge(config, OverridePatch(o).dump().c_str());
  if (st == SM_OK) st = sm_config_validate(config);
  if (st != SM_OK) {
    sm_config_free(config);
    std::cerr << "stillmotion: " << sm_last_error() << "\n";
    return kExitValidation;
  }
  char* report = nullptr;
  st = stage ? sm_pipeline_run_stage(config, stage->c_str(), &report) : sm_pipeline_run(config, &report);
  sm_config_free(config);
  if (st != SM_OK) return Report(st);
  std::cout << report << "\n";
  sm_string_free(report);
  return kExitOk;
}

int Serve(const std::string& host, int port, const nlohmann::json& options) {
  sm_service* service = nullptr;
  sm_status st = sm_service_create(options.empty() ? nullptr : options.dump().c_str(), &service);
  if (st != SM_OK) return Report(st);
  // Block SIGINT/SIGTERM before the server threads exist so only sigwait
  // below sees them; shutdown then drains in-flight requests.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
  int bound = 0;
  st = sm_service_start(service, host.c_str(), port, &bound);
  if (st != SM_OK) {
    sm_service_free(service);
    return Report(st);
  }
  std::cerr << "stillmotion: serving on http://" << host << ":" << bound << std::endl;
  int received = 0;
  sigwait(&stop_signals, &received);
  sm_service_stop(service);
  st = sm_service_wait(service);
  sm_service_free(service);
  return st == SM_OK ? kExitOk : Report(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turn a still image into a short looping animation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sm_version()));

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "Segment, inpaint, animate and encode in one go");
  AddPipelineOptions(run, run_opts);

  Overrides stage_opts[3];
  const char* stage_names[3] = {"segment", "inpaint", "animate"};
  const char* stage_help[3] = {"Write mask.png from the input image and clicks",
                               "Write background.png from the input image and mask.png",
                               "Render the animation from mask.png and background.png"};
  CLI::App* stage_cmds[3];
  for (int i = 0; i < 3; ++i) {
    stage_cmds[i] = app.add_subcommand(stage_names[i], stage_help[i]);
    AddPipelineOptions(stage_cmds[i], stage_opts[i]);
  }

  std::string host = "127.0.0.1";
  int port = 8080;
  if (const char* env = std::getenv("PORT")) port = std::atoi(env);
  std::optional<long long> ttl;
  std::optional<std::size_t> max_bytes;
  std::optional<std::string> session_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP session API");
  serve->add_option("--port", port, "Listen port (default $PORT or 8080)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--ttl", ttl, "Idle session lifetime in seconds");
  serve->add_option("--max-image-bytes", max_bytes, "Upload size cap");
  serve->add_option("--session-dir", session_dir, "Persist sessions here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (run->parsed()) return RunPipeline(run_opts, std::nullopt);
  for (int i = 0; i < 3; ++i) {
    if (stage_cmds[i]->parsed()) return RunPipeline(stage_opts[i], std::string(stage_names[i]));
  }
  if (serve->parsed()) {
    nlohmann::json options = nlohmann::json::object();
    if (ttl) options["ttl_secs"] = *ttl;
    if (max_bytes) options["max_image_bytes"] = *max_bytes;
    if (session_dir) options["session_dir"] = *session_dir;
    return Serve(host, port, options);
  }
  return kExitValidation;
}
