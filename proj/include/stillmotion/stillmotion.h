/*
 * Copyright 2026 The stillmotion Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STILLMOTION_STILLMOTION_H_
#define STILLMOTION_STILLMOTION_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SM_API __declspec(dllexport)
#else
#define SM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure sm_last_error() holds a
 * message for the calling thread until its next failing call. */
typedef enum sm_status {
  SM_OK = 0,
  SM_ERR_INVALID_ARGUMENT = 1,
  SM_ERR_NOT_FOUND = 2,
  SM_ERR_DECODE = 3,
  SM_ERR_IO = 4,
  SM_ERR_OUT_OF_RANGE = 5,
  SM_ERR_CONFLICT = 6,
  SM_ERR_NO_BOUNDARY = 7,
  SM_ERR_VALIDATION = 8,
  SM_ERR_STATE = 9,
  SM_ERR_INTERNAL = 10
} sm_status;

typedef struct sm_image sm_image;
typedef struct sm_config sm_config;
typedef struct sm_service sm_service;

SM_API const char* sm_version(void);
SM_API const char* sm_last_error(void);
SM_API const char* sm_status_name(sm_status status);

/* Buffers returned through out-parameters are owned by the caller. */
SM_API void sm_bytes_free(uint8_t* bytes);
SM_API void sm_string_free(char* text);

/* ---- images (RGBA, 8 bits per channel) ---- */
SM_API sm_status sm_image_load(const char* path, sm_image** out);
SM_API sm_status sm_image_decode(const uint8_t* data, size_t size, sm_image** out);
SM_API sm_status sm_image_create(int width, int height, const uint8_t* rgba, sm_image** out);
SM_API sm_status sm_image_save(const sm_image* image, const char* path);
SM_API sm_status sm_image_encode_png(const sm_image* image, uint8_t** data, size_t* size);
SM_API int sm_image_width(const sm_image* image);
SM_API int sm_image_height(const sm_image* image);
SM_API const uint8_t* sm_image_pixels(const sm_image* image);
SM_API void sm_image_free(sm_image* image);

/* ---- processing steps ----
 * Masks travel as images: white marks the subject.
 * params_json may be NULL for defaults:
 *   sm_segment: {"k", "seed", "weights", "closing_radius", "policy", "merge_threshold"}
 *   sm_inpaint: {"dilation", "tolerance", "iterations"}
 *   sm_render_gif: render_json {"sampling", "nx", "ny"}; spec_json is an
 *   animation spec {"kind", "amplitude", "waves", ...}. */
SM_API sm_status sm_segment(const sm_image* image, const char* clicks_json, const char* params_json,
                            sm_image** mask_out);
SM_API sm_status sm_inpaint(const sm_image* image, const sm_image* mask, const char* params_json,
                            sm_image** plate_out, double* residual_out);
SM_API sm_status sm_render_gif(const sm_image* image, const sm_image* mask, const sm_image* plate,
                               const char* spec_json, const char* render_json, uint8_t** gif_out,
                               size_t* gif_size);

/* ---- pipeline ---- */
SM_API sm_status sm_config_parse(const char* json, sm_config** out);
SM_API sm_status sm_config_load(const char* path, sm_config** out);
/* RFC 7386 merge patch; later patches win. */
SM_API sm_status sm_config_merge(sm_config* config, const char* json_patch);
/* Reports every problem at once in sm_last_error(). */
SM_API sm_status sm_config_validate(const sm_config* config);
SM_API void sm_config_free(sm_config* config);

/* Writes artifacts and returns a JSON run report. stage is one of
 * "segment", "inpaint", "animate". */
SM_API sm_status sm_pipeline_run(const sm_config* config, char** report_json);
SM_API sm_status sm_pipeline_run_stage(const sm_config* config, const char* stage, char** report_json);

/* ---- HTTP session service ----
 * options_json may be NULL; keys: "ttl_secs", "max_image_bytes",
 * "session_dir". Environment variables fill unset keys. */
SM_API sm_status sm_service_create(const char* options_json, sm_service** out);
/* Binds host:port (0 picks a free port) and serves on a background thread. */
SM_API sm_status sm_service_start(sm_service* service, const char* host, int port, int* bound_port);
/* Blocks until sm_service_stop() is called from another thread. */
SM_API sm_status sm_service_wait(sm_service* service);
SM_API void sm_service_stop(sm_service* service);
SM_API void sm_service_free(sm_service* service);

#ifdef __cplusplus
}
#endif

#endif /* STILLMOTION_STILLMOTION_H_ */
