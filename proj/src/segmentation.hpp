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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "image.hpp"

namespace stillmotion {

inline constexpr int kFeatureDims = 5;
using Feature = std::array<double, kFeatureDims>;

// Per-pixel (R, G, B, distance to nearest positive click, distance to nearest
// negative click), each multiplied by its channel weight.
struct FeatureField {
  int width = 0;
  int height = 0;
  Feature weights{};
  std::vector<Feature> features;

  std::size_t size() const { return features.size(); }
};

inline constexpr Feature kDefaultFeatureWeights = {1.0, 1.0, 1.0, 0.5, 0.5};

// Distance channels are clamped to twice the image diagonal before weighting.
// Throws kInvalidArgument for a weight that is not strictly positive.
FeatureField BuildFeatureField(const ImageBuffer& image, const ClickSet& clicks,
                               const Feature& weights = kDefaultFeatureWeights);

struct ClusterModel {
  int width = 0;
  int height = 0;
  int k = 0;
  std::vector<Feature> centers;
  std::vector<int> labels;
  std::vector<std::size_t> counts;
  double objective = 0.0;
  // Objective after every assignment step, one list per Lloyd run (the
  // initial run plus one per merge).
  std::vector<std::vector<double>> lloyd_objectives;
  int merges = 0;

  int label_at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

double SquaredDistance(const Feature& a, const Feature& b);

// Bounding-box diagonal of all feature vectors, times 0.1.
double DefaultMergeThreshold(const FeatureField& field);

// Farthest-point seeding from a seeded RNG, Lloyd iterations to an assignment
// fixpoint, then repeated merging of the closest center pair while it lies
// within merge_threshold, re-running Lloyd after each merge. A negative
// threshold selects DefaultMergeThreshold.
ClusterModel KMeans(const FeatureField& field, int k, std::uint64_t seed,
                    double merge_threshold = -1.0);

// Within-cluster sum of squared feature distances for the given labels and
// centers.
double ClusterObjective(const FeatureField& field, const std::vector<int>& labels,
                        const std::vector<Feature>& centers);

// Union of 4-connected components of the clicked clusters that contain a
// positive click, minus any component holding a negative click. Throws
// kInvalidArgument without positives and kConflict when a positive click
// would be excluded.
Mask ExtractSubject(const ClusterModel& model, const ClickSet& clicks);

enum class ComponentPolicy { kAll, kLargest, kClicked };

ComponentPolicy ParseComponentPolicy(const std::string& name);
const char* ComponentPolicyName(ComponentPolicy policy);

// Closing (dilate then erode) followed by component filtering. With clicks
// given, negative click pixels are cleared after closing; kClicked keeps the
// components holding a positive click and requires clicks.
Mask RefineMask(const Mask& mask, int closing_radius, ComponentPolicy policy,
                const ClickSet* clicks = nullptr);

struct SegmentParams {
  int k = 6;
  std::uint64_t seed = 0;
  Feature weights = kDefaultFeatureWeights;
  int closing_radius = 2;
  ComponentPolicy policy = ComponentPolicy::kClicked;
  double merge_threshold = -1.0;
};

struct SegmentResult {
  Mask mask;
  ClusterModel model;
};

// Full click-guided segmentation, recomputed from the whole click set.
SegmentResult SegmentSubject(const ImageBuffer& image, const ClickSet& clicks,
                             const SegmentParams& params = {});

}  // namespace stillmotion
