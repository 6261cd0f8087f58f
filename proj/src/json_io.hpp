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

#include <json.hpp>
#include <string>

#include "image.hpp"
#include "mesh.hpp"

namespace stillmotion {

// {"positives": [[x, y], ...], "negatives": [[x, y], ...]}; either list may
// be omitted. Throws kInvalidArgument on malformed documents.
ClickSet ClickSetFromJson(const nlohmann::json& doc);
nlohmann::json ClickSetToJson(const ClickSet& clicks);

// {"kind": "hwave"|"vwave"|"jump", "amplitude", "waves", "speed", "phase0",
//  "frames", "duration", "delay", "keyframes": [{"t", "scale_x", "scale_y",
//  "translate_y"}, ...]}. Missing fields keep their defaults; unknown fields
// are rejected. The result is validated.
Animation AnimationFromJson(const nlohmann::json& doc);
nlohmann::json AnimationToJson(const Animation& animation);

// Parses text, mapping syntax errors to kInvalidArgument.
nlohmann::json ParseJson(const std::string& text);

}  // namespace stillmotion
