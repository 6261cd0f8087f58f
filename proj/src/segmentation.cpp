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

#include "segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "error.hpp"
#include "imagecore.hpp"

namespace stillmotion {

namespace {

constexpr int kMaxLloydIterations = 500;

struct LloydState {
  std::vector<Feature> centers;
  std::vector<int> labels;
};

int NearestCenter(const Feature& f, const std::vector<Feature>& centers) {
  int best = 0;
  double best_d = SquaredDistance(f, centers[0]);
  for (std::size_t c = 1; c < centers.size(); ++c) {
    const double d = SquaredDistance(f, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// Runs Lloyd iterations until no label changes. Empty clusters are reseeded
// to the feature farthest from its own center, or dropped when every feature
// already sits on its center.
std::vector<double> RunLloyd(const FeatureField& field, LloydState& state) {
  const std::size_t n = field.size();
  std::vector<double> history;
  state.labels.assign(n, -1);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int l = NearestCenter(field.features[i], state.centers);
      if (l != state.labels[i]) {
        state.labels[i] = l;
        changed = true;
      }
      objective += SquaredDistance(field.features[i], state.centers[static_cast<std::size_t>(l)]);
    }
    if (!history.empty() && objective > history.back() * (1.0 + 1e-9) + 1e-9) {
      throw Error(ErrorCode::kInternal, "k-means objective increased during Lloyd iteration");
    }
    history.push_back(objective);

    const std::size_t k = state.centers.size();
    std::vector<Feature> sums(k, Feature{});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(state.labels[i]);
      ++counts[l];
      for (int d = 0; d < kFeatureDims; ++d) sums[l][d] += field.features[i][d];
    }
    bool reseeded = false;
    std::vector<bool> drop(k, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        double far_d = 0.0;
        std::size_t far_i = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = SquaredDistance(
              field.features[i], state.centers[static_cast<std::size_t>(state.labels[i])]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        if (far_d > 0.0) {
          state.centers[c] = field.features[far_i];
          reseeded = true;
        } else {
          drop[c] = true;
        }
        continue;
      }
      for (int d = 0; d < kFeatureDims; ++d) {
        state.centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
    if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
      std::vector<int> remap(k, -1);
      std::vector<Feature> kept;
      for (std::size_t c = 0; c < k; ++c) {
        if (!drop[c]) {
          remap[c] = static_cast<int>(kept.size());
          kept.push_back(state.centers[c]);
        }
      }
      state.centers = std::move(kept);
      for (int& l : state.labels) l = remap[static_cast<std::size_t>(l)];
    }
    if (!changed && !reseeded) break;
  }
  return history;
}

std::vector<Feature> SeedCenters(const FeatureField& field, int k, std::uint64_t seed) {
  const std::size_t n = field.size();
  std::mt19937_64 rng(seed);
  std::vector<Feature> centers;
  centers.push_back(field.features[static_cast<std::size_t>(rng() % n)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    std::size_t far_i = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], SquaredDistance(field.features[i], centers.back()));
      if (nearest[i] > far_d) {
        far_d = nearest[i];
        far_i = i;
      }
    }
    centers.push_back(field.features[far_i]);
  }
  return centers;
}

}  // namespace

double SquaredDistance(const Feature& a, const Feature& b) {
  double s = 0.0;
  for (int d = 0; d < kFeatureDims; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

FeatureField BuildFeatureField(const ImageBuffer& image, const ClickSet& clicks,
                               const Feature& weights) {
  for (int d = 0; d < kFeatureDims; ++d) {
    if (!(weights[d] > 0.0) || !std::isfinite(weights[d])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature weight " + std::to_string(d) + " must be positive, got " +
                      std::to_string(weights[d]));
    }
  }
  ValidateClicks(clicks, image.width(), image.height());
  const ScalarField dpos = DistanceTransform(clicks.positives, image.width(), image.height());
  const ScalarField dneg = DistanceTransform(clicks.negatives, image.width(), image.height());
  const double clamp = 2.0 * std::hypot(static_cast<double>(image.width()),
                                        static_cast<double>(image.height()));

  FeatureField field;
  field.width = image.width();
  field.height = image.height();
  field.weights = weights;
  field.features.resize(image.pixel_count());
  std::size_t i = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x, ++i) {
      const std::uint8_t* p = image.pixel(x, y);
      field.features[i] = {p[0] * weights[0], p[1] * weights[1], p[2] * weights[2],
                           std::min(dpos.at(x, y), clamp) * weights[3],
                           std::min(dneg.at(x, y), clamp) * weights[4]};
    }
  }
  return field;
}

double DefaultMergeThreshold(const FeatureField& field) {
  Feature lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const Feature& f : field.features) {
    for (int d = 0; d < kFeatureDims; ++d) {
      lo[d] = std::min(lo[d], f[d]);
      hi[d] = std::max(hi[d], f[d]);
    }
  }
  return 0.1 * std::sqrt(SquaredDistance(lo, hi));
}

double ClusterObjective(const FeatureField& field, const std::vector<int>& labels,
                        const std::vector<Feature>& centers) {
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    s += SquaredDistance(field.features[i], centers[static_cast<std::size_t>(labels[i])]);
  }
  return s;
}

ClusterModel KMeans(const FeatureField& field, int k, std::uint64_t seed,
                    double merge_threshold) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be >= 1, got " + std::to_string(k));
  }
  if (field.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kInvalidArgument,
                "k = " + std::to_string(k) + " exceeds pixel count " +
                    std::to_string(field.size()));
  }
  const double threshold = merge_threshold < 0.0 ? DefaultMergeThreshold(field) : merge_threshold;

  ClusterModel model;
  model.width = field.width;
  model.height = field.height;

  LloydState state;
  state.centers = SeedCenters(field, k, seed);
  model.lloyd_objectives.push_back(RunLloyd(field, state));

  while (state.centers.size() > 1) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.centers.size(); ++i) {
      for (std::size_t j = i + 1; j < state.centers.size(); ++j) {
        const double d = SquaredDistance(state.centers[i], state.centers[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (std::sqrt(best) > threshold) break;

    std::size_t ci = 0, cj = 0;
    for (int l : state.labels) {
      if (l == static_cast<int>(bi)) ++ci;
      if (l == static_cast<int>(bj)) ++cj;
    }
    Feature merged{};
    const double total = static_cast<double>(ci + cj);
    for (int d = 0; d < kFeatureDims; ++d) {
      merged[d] = total > 0.0 ? (state.centers[bi][d] * static_cast<double>(ci) +
                                 state.centers[bj][d] * static_cast<double>(cj)) /
                                    total
                              : state.centers[bi][d];
    }
    state.centers[bi] = merged;
    state.centers.erase(state.centers.begin() + static_cast<std::ptrdiff_t>(bj));
    ++model.merges;
    model.lloyd_objectives.push_back(RunLloyd(field, state));
  }

  model.k = static_cast<int>(state.centers.size());
  model.centers = std::move(state.centers);
  model.labels = std::move(state.labels);
  model.counts.assign(model.centers.size(), 0);
  for (int l : model.labels) ++model.counts[static_cast<std::size_t>(l)];
  model.objective = ClusterObjective(field, model.labels, model.centers);
  return model;
}

Mask ExtractSubject(const ClusterModel& model, const ClickSet& clicks) {
  if (clicks.positives.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one positive click is required");
  }
  ValidateClicks(clicks, model.width, model.height);

  std::vector<bool> clicked(static_cast<std::size_t>(model.k), false);
  for (Point p : clicks.positives) clicked[static_cast<std::size_t>(model.label_at(p.x, p.y))] = true;
  Mask candidate(model.width, model.height);
  for (int y = 0; y < model.height; ++y) {
    for (int x = 0; x < model.width; ++x) {
      candidate.set(x, y, clicked[static_cast<std::size_t>(model.label_at(x, y))]);
    }
  }

  const Components comps = ConnectedComponents(candidate);
  std::vector<bool> keep(static_cast<std::size_t>(comps.count) + 1, false);
  for (Point p : clicks.positives) keep[static_cast<std::size_t>(comps.at(p.x, p.y))] = true;
  for (Point n : clicks.negatives) {
    const int l = comps.at(n.x, n.y);
    if (l) keep[static_cast<std::size_t>(l)] = false;
  }
  for (Point p : clicks.positives) {
    if (!keep[static_cast<std::size_t>(comps.at(p.x, p.y))]) {
      throw Error(ErrorCode::kConflict,
                  "clicks conflict: positive click (" + std::to_string(p.x) + ", " +
                      std::to_string(p.y) + ") shares a region with a negative click");
    }
  }

  Mask out(model.width, model.height);
  for (int y = 0; y < model.height; ++y) {
    for (int x = 0; x < model.width; ++x) {
      const int l = comps.at(x, y);
      if (l && keep[static_cast<std::size_t>(l)]) out.set(x, y, true);
    }
  }
  return out;
}

ComponentPolicy ParseComponentPolicy(const std::string& name) {
  if (name == "all") return ComponentPolicy::kAll;
  if (name == "largest") return ComponentPolicy::kLargest;
  if (name == "clicked") return ComponentPolicy::kClicked;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown component policy '" + name + "' (expected all, largest or clicked)");
}

const char* ComponentPolicyName(ComponentPolicy policy) {
  switch (policy) {
    case ComponentPolicy::kAll: return "all";
    case ComponentPolicy::kLargest: return "largest";
    case ComponentPolicy::kClicked: return "clicked";
  }
  return "all";
}

Mask RefineMask(const Mask& mask, int closing_radius, ComponentPolicy policy,
                const ClickSet* clicks) {
  if (closing_radius < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "closing radius must be >= 0, got " + std::to_string(closing_radius));
  }
  Mask closed = Erode(Dilate(mask, closing_radius), closing_radius);
  if (clicks) {
    ValidateClicks(*clicks, mask.width(), mask.height());
    for (Point n : clicks->negatives) closed.set(n.x, n.y, false);
  }
  if (policy == ComponentPolicy::kAll) return closed;

  const Components comps = ConnectedComponents(closed);
  std::vector<bool> keep(static_cast<std::size_t>(comps.count) + 1, false);
  if (policy == ComponentPolicy::kLargest) {
    const auto sizes = comps.Sizes();
    std::size_t best = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      if (sizes[l] > sizes[best] || best == 0) best = l;
    }
    if (best) keep[best] = true;
  } else {
    if (!clicks || clicks->positives.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "component policy 'clicked' needs at least one positive click");
    }
    for (Point p : clicks->positives) keep[static_cast<std::size_t>(comps.at(p.x, p.y))] = true;
    keep[0] = false;
  }

  Mask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (keep[static_cast<std::size_t>(comps.at(x, y))]) out.set(x, y, true);
    }
  }
  return out;
}

SegmentResult SegmentSubject(const ImageBuffer& image, const ClickSet& clicks,
                             const SegmentParams& params) {
  const FeatureField field = BuildFeatureField(image, clicks, params.weights);
  ClusterModel model = KMeans(field, params.k, params.seed, params.merge_threshold);
  const Mask raw = ExtractSubject(model, clicks);
  Mask refined = RefineMask(raw, params.closing_radius, params.policy, &clicks);
  return {std::move(refined), std::move(model)};
}

}  // namespace stillmotion
