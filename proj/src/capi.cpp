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

#include "stillmotion/stillmotion.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "error.hpp"
#include "image_io.hpp"
#include "json_io.hpp"
#include "pipeline.hpp"
#include "service.hpp"

using nlohmann::json;
using stillmotion::Error;
using stillmotion::ErrorCode;

struct sm_image {
  stillmotion::ImageBuffer rep;
};

struct sm_config {
  json doc;
};

struct sm_service {
  std::unique_ptr<stillmotion::SessionService> service;
  std::unique_ptr<stillmotion::HttpServer> server;
};

namespace {

thread_local std::string g_last_error;

sm_status Fail(sm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
sm_status Guard(Fn&& fn) {
  try {
    fn();
    return SM_OK;
  } catch (const Error& e) {
    return Fail(static_cast<sm_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return Fail(SM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SM_ERR_INTERNAL, e.what());
  }
}

void Require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

uint8_t* CopyBytes(const std::vector<std::uint8_t>& bytes) {
  auto* out = static_cast<uint8_t*>(std::malloc(bytes.empty() ? 1 : bytes.size()));
  if (!out) throw std::bad_alloc();
  if (!bytes.empty()) std::memcpy(out, bytes.data(), bytes.size());
  return out;
}

json OptionalJson(const char* text) {
  if (!text || !*text) return json::object();
  json doc = stillmotion::ParseJson(text);
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "parameters must be a JSON object");
  return doc;
}

stillmotion::SegmentParams SegmentParamsFromJson(const json& doc) {
  stillmotion::SegmentParams p;
  for (const auto& [key, value] : doc.items()) {
    if (key == "k") {
      p.k = value.get<int>();
    } else if (key == "seed") {
      p.seed = value.get<std::uint64_t>();
    } else if (key == "weights") {
      if (!value.is_array() || value.size() != stillmotion::kFeatureDims) {
        throw Error(ErrorCode::kInvalidArgument, "weights must hold 5 numbers");
      }
      for (int d = 0; d < stillmotion::kFeatureDims; ++d) p.weights[d] = value[static_cast<std::size_t>(d)].get<double>();
    } else if (key == "closing_radius") {
      p.closing_radius = value.get<int>();
    } else if (key == "policy") {
      p.policy = stillmotion::ParseComponentPolicy(value.get<std::string>());
    } else if (key == "merge_threshold") {
      p.merge_threshold = value.is_null() ? -1.0 : value.get<double>();
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown segmentation parameter '" + key + "'");
    }
  }
  return p;
}

stillmotion::InpaintConfig InpaintFromJson(const json& doc) {
  stillmotion::InpaintConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "dilation") {
      c.pre_dilation = value.get<int>();
    } else if (key == "tolerance") {
      c.tolerance = value.get<double>();
    } else if (key == "iterations") {
      c.max_iterations = value.get<int>();
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown inpaint parameter '" + key + "'");
    }
  }
  return c;
}

stillmotion::RenderSettings RenderFromJson(const json& doc) {
  stillmotion::RenderSettings r;
  for (const auto& [key, value] : doc.items()) {
    if (key == "sampling") {
      r.sampling = stillmotion::ParseSampling(value.get<std::string>());
    } else if (key == "nx") {
      r.mesh.nx = value.get<int>();
    } else if (key == "ny") {
      r.mesh.ny = value.get<int>();
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown render parameter '" + key + "'");
    }
  }
  return r;
}

}  // namespace

extern "C" {

const char* sm_version(void) { return "1.0.0"; }

const char* sm_last_error(void) { return g_last_error.c_str(); }

const char* sm_status_name(sm_status status) {
  if (status == SM_OK) return "ok";
  return stillmotion::ErrorCodeName(static_cast<ErrorCode>(status));
}

void sm_bytes_free(uint8_t* bytes) { std::free(bytes); }

void sm_string_free(char* text) { std::free(text); }

sm_status sm_image_load(const char* path, sm_image** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new sm_image{stillmotion::LoadImage(path)};
  });
}

sm_status sm_image_decode(const uint8_t* data, size_t size, sm_image** out) {
  return Guard([&] {
    Require(out, "out");
    if (!data && size) throw Error(ErrorCode::kInvalidArgument, "data must not be NULL");
    *out = new sm_image{stillmotion::DecodeImage({data, size})};
  });
}

sm_status sm_image_create(int width, int height, const uint8_t* rgba, sm_image** out) {
  return Guard([&] {
    Require(rgba, "rgba");
    Require(out, "out");
    if (width < 1 || height < 1) throw Error(ErrorCode::kInvalidArgument, "image dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4;
    *out = new sm_image{stillmotion::ImageBuffer(width, height, std::vector<std::uint8_t>(rgba, rgba + n))};
  });
}

sm_status sm_image_save(const sm_image* image, const char* path) {
  return Guard([&] {
    Require(image, "image");
    Require(path, "path");
    stillmotion::SaveImage(image->rep, path);
  });
}

sm_status sm_image_encode_png(const sm_image* image, uint8_t** data, size_t* size) {
  return Guard([&] {
    Require(image, "image");
    Require(data, "data");
    Require(size, "size");
    const auto bytes = stillmotion::EncodePng(image->rep);
    *data = CopyBytes(bytes);
    *size = bytes.size();
  });
}

int sm_image_width(const sm_image* image) { return image ? image->rep.width() : 0; }

int sm_image_height(const sm_image* image) { return image ? image->rep.height() : 0; }

const uint8_t* sm_image_pixels(const sm_image* image) {
  return image ? image->rep.bytes().data() : nullptr;
}

void sm_image_free(sm_image* image) { delete image; }

sm_status sm_segment(const sm_image* image, const char* clicks_json, const char* params_json,
                     sm_image** mask_out) {
  return Guard([&] {
    Require(image, "image");
    Require(clicks_json, "clicks_json");
    Require(mask_out, "mask_out");
    const auto clicks = stillmotion::ClickSetFromJson(stillmotion::ParseJson(clicks_json));
    const auto params = SegmentParamsFromJson(OptionalJson(params_json));
    const auto result = stillmotion::SegmentSubject(image->rep, clicks, params);
    *mask_out = new sm_image{stillmotion::MaskToImage(result.mask)};
  });
}

sm_status sm_inpaint(const sm_image* image, const sm_image* mask, const char* params_json,
                     sm_image** plate_out, double* residual_out) {
  return Guard([&] {
    Require(image, "image");
    Require(mask, "mask");
    Require(plate_out, "plate_out");
    auto result = stillmotion::MakeBackground(image->rep, stillmotion::ImageToMask(mask->rep),
                                              InpaintFromJson(OptionalJson(params_json)));
    if (residual_out) *residual_out = result.residual;
    *plate_out = new sm_image{std::move(result.image)};
  });
}

sm_status sm_render_gif(const sm_image* image, const sm_image* mask, const sm_image* plate,
                        const char* spec_json, const char* render_json, uint8_t** gif_out,
                        size_t* gif_size) {
  return Guard([&] {
    Require(image, "image");
    Require(mask, "mask");
    Require(plate, "plate");
    Require(gif_out, "gif_out");
    Require(gif_size, "gif_size");
    const auto animation = stillmotion::AnimationFromJson(OptionalJson(spec_json));
    const auto gif = stillmotion::RenderGif(image->rep, stillmotion::ImageToMask(mask->rep), plate->rep,
                                            animation, RenderFromJson(OptionalJson(render_json)));
    *gif_out = CopyBytes(gif);
    *gif_size = gif.size();
  });
}

sm_status sm_config_parse(const char* text, sm_config** out) {
  return Guard([&] {
    Require(text, "json");
    Require(out, "out");
    json doc = stillmotion::ParseJson(text);
    if (!doc.is_object()) throw Error(ErrorCode::kValidation, "config must be a JSON object");
    *out = new sm_config{std::move(doc)};
  });
}

sm_status sm_config_load(const char* path, sm_config** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw Error(ErrorCode::kValidation, std::string("config file not found: ") + path);
    }
    const auto bytes = stillmotion::ReadFileBytes(path);
    json doc;
    try {
      doc = stillmotion::ParseJson(std::string(bytes.begin(), bytes.end()));
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation, std::string(path) + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::kValidation, "config must be a JSON object");
    *out = new sm_config{std::move(doc)};
  });
}

sm_status sm_config_merge(sm_config* config, const char* json_patch) {
  return Guard([&] {
    Require(config, "config");
    Require(json_patch, "json_patch");
    config->doc.merge_patch(stillmotion::ParseJson(json_patch));
  });
}

sm_status sm_config_validate(const sm_config* config) {
  return Guard([&] {
    Require(config, "config");
    stillmotion::PipelineConfigFromJson(config->doc);
  });
}

void sm_config_free(sm_config* config) { delete config; }

sm_status sm_pipeline_run(const sm_config* config, char** report_json) {
  return Guard([&] {
    Require(config, "config");
    const auto cfg = stillmotion::PipelineConfigFromJson(config->doc);
    const auto report = stillmotion::RunPipeline(cfg);
    if (report_json) *report_json = CopyString(report.ToJson().dump(2));
  });
}

sm_status sm_pipeline_run_stage(const sm_config* config, const char* stage, char** report_json) {
  return Guard([&] {
    Require(config, "config");
    Require(stage, "stage");
    const auto which = stillmotion::ParseStage(stage);
    const auto cfg = stillmotion::PipelineConfigFromJson(config->doc);
    const auto report = stillmotion::RunStage(cfg, which);
    if (report_json) *report_json = CopyString(report.ToJson().dump(2));
  });
}

sm_status sm_service_create(const char* options_json, sm_service** out) {
  return Guard([&] {
    Require(out, "out");
    auto options = stillmotion::ServiceOptions::FromEnvironment();
    const json requested = OptionalJson(options_json);
    for (const auto& [key, value] : requested.items()) {
      if (key == "ttl_secs") {
        options.session_ttl = std::chrono::seconds(value.get<long long>());
      } else if (key == "max_image_bytes") {
        options.max_image_bytes = value.get<std::size_t>();
      } else if (key == "session_dir") {
        options.persist_dir = value.get<std::string>();
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown service option '" + key + "'");
      }
    }
    auto svc = std::make_unique<sm_service>();
    svc->service = std::make_unique<stillmotion::SessionService>(std::move(options));
    svc->server = std::make_unique<stillmotion::HttpServer>(*svc->service);
    *out = svc.release();
  });
}

sm_status sm_service_start(sm_service* service, const char* host, int port, int* bound_port) {
  return Guard([&] {
    Require(service, "service");
    const int bound = service->server->Bind(host ? host : "0.0.0.0", port);
    if (bound_port) *bound_port = bound;
    service->server->Start();
  });
}

sm_status sm_service_wait(sm_service* service) {
  return Guard([&] {
    Require(service, "service");
    service->server->Wait();
  });
}

void sm_service_stop(sm_service* service) {
  if (service) service->server->Stop();
}

void sm_service_free(sm_service* service) {
  if (!service) return;
  service->server->Stop();
  delete service;
}

}  // extern "C"
