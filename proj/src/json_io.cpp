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

#include "json_io.hpp"

#include <set>

#include "error.hpp"

namespace stillmotion {

using nlohmann::json;

namespace {

Point PointFromJson(const json& item) {
  if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
      !item[1].is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument, "click must be an [x, y] integer pair, got " + item.dump());
  }
  return {item[0].get<int>(), item[1].get<int>()};
}

std::vector<Point> PointsFromJson(const json& doc, const char* key) {
  std::vector<Point> out;
  if (!doc.contains(key)) return out;
  const json& list = doc.at(key);
  if (!list.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("'") + key + "' must be an array");
  }
  for (const json& item : list) out.push_back(PointFromJson(item));
  return out;
}

double Number(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing field '") + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("'") + key + "' must be a number");
  }
  return v.get<double>();
}

int Integer(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing field '") + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("'") + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

json ParseJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

ClickSet ClickSetFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "click set must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "positives" && key != "negatives") {
      throw Error(ErrorCode::kInvalidArgument, "unknown click set field '" + key + "'");
    }
  }
  return {PointsFromJson(doc, "positives"), PointsFromJson(doc, "negatives")};
}

json ClickSetToJson(const ClickSet& clicks) {
  auto list = [](const std::vector<Point>& pts) {
    json out = json::array();
    for (Point p : pts) out.push_back({p.x, p.y});
    return out;
  };
  return {{"positives", list(clicks.positives)}, {"negatives", list(clicks.negatives)}};
}

Animation AnimationFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "animation spec must be a JSON object");
  static const std::set<std::string> kKnown = {"kind",   "amplitude", "waves", "speed",    "phase0",
                                               "frames", "duration",  "delay", "keyframes"};
  for (const auto& [key, _] : doc.items()) {
    if (!kKnown.count(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown animation field '" + key + "'");
    }
  }
  Animation a;
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) throw Error(ErrorCode::kInvalidArgument, "'kind' must be a string");
    a.kind = ParseAnimationKind(doc["kind"].get<std::string>());
  }
  if (doc.contains("amplitude")) a.wave.amplitude = Number(doc, "amplitude");
  if (doc.contains("waves")) a.wave.wave_count = Number(doc, "waves");
  if (doc.contains("speed")) a.wave.speed = Number(doc, "speed");
  if (doc.contains("phase0")) a.wave.phase0 = Number(doc, "phase0");
  if (doc.contains("frames")) a.frames = Integer(doc, "frames");
  if (doc.contains("duration")) a.duration = Number(doc, "duration");
  if (doc.contains("delay") && !doc["delay"].is_null()) a.delay_cs = Integer(doc, "delay");
  if (doc.contains("keyframes") && !doc["keyframes"].is_null()) {
    const json& list = doc["keyframes"];
    if (!list.is_array()) throw Error(ErrorCode::kInvalidArgument, "'keyframes' must be an array");
    a.timeline.keyframes.clear();
    for (const json& k : list) {
      if (!k.is_object()) throw Error(ErrorCode::kInvalidArgument, "keyframe must be an object");
      Keyframe kf;
      kf.time = Number(k, "t");
      if (k.contains("scale_x")) kf.pose.scale_x = Number(k, "scale_x");
      if (k.contains("scale_y")) kf.pose.scale_y = Number(k, "scale_y");
      if (k.contains("translate_y")) kf.pose.translate_y = Number(k, "translate_y");
      a.timeline.keyframes.push_back(kf);
    }
  }
  if (a.frames > 9999) throw Error(ErrorCode::kInvalidArgument, "animation frames must be <= 9999");
  ValidateAnimation(a);
  return a;
}

json AnimationToJson(const Animation& a) {
  json keyframes = json::array();
  for (const Keyframe& k : a.timeline.keyframes) {
    keyframes.push_back({{"t", k.time},
                         {"scale_x", k.pose.scale_x},
                         {"scale_y", k.pose.scale_y},
                         {"translate_y", k.pose.translate_y}});
  }
  json out = {{"kind", AnimationKindName(a.kind)},
              {"amplitude", a.wave.amplitude},
              {"waves", a.wave.wave_count},
              {"speed", a.wave.speed},
              {"phase0", a.wave.phase0},
              {"frames", a.frames},
              {"duration", a.duration},
              {"keyframes", keyframes}};
  if (a.delay_cs) out["delay"] = *a.delay_cs;
  return out;
}

}  // namespace stillmotion
