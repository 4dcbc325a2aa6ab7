/*
 * Copyright 2026 The rankpair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankpair/harness/scenario.h"

#include <algorithm>
#include <random>
#include <string>
#include <tuple>

#include "rankpair/errors.h"

namespace rankpair::harness {
namespace {

constexpr double kMinSide = 0.1;
constexpr double kMaxSide = 0.4;
constexpr double kMinBackgroundSide = 0.05;
constexpr double kMaxBackgroundSide = 0.2;
constexpr double kMinCandidateSide = 1e-3;
constexpr int kMaxPlacementAttempts = 1000;

Box random_box(std::mt19937_64& rng, double min_side, double max_side) {
  std::uniform_real_distribution<double> side(min_side, max_side);
  const double w = side(rng);
  const double h = side(rng);
  std::uniform_real_distribution<double> x(0.0, 1.0 - w);
  std::uniform_real_distribution<double> y(0.0, 1.0 - h);
  const double x1 = x(rng);
  const double y1 = y(rng);
  return {x1, y1, x1 + w, y1 + h};
}

// Sorts a jittered interval and widens it to at least kMinCandidateSide.
std::pair<double, double> fix_interval(double a, double b) {
  if (a > b) std::swap(a, b);
  if (b - a < kMinCandidateSide) {
    const double mid = 0.5 * (a + b);
    a = mid - 0.5 * kMinCandidateSide;
    b = mid + 0.5 * kMinCandidateSide;
  }
  return {a, b};
}

}  // namespace

DetectionInstance generate_instance(const ScenarioConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  DetectionInstance inst;

  for (std::size_t g = 0; g < cfg.n_gts; ++g) {
    inst.gt_boxes.push_back(random_box(rng, kMinSide, kMaxSide));
  }

  for (std::size_t g = 0; g < cfg.n_gts; ++g) {
    const Box& gt = inst.gt_boxes[g];
    const double sx = cfg.box_noise * gt.width();
    const double sy = cfg.box_noise * gt.height();
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 0; c < cfg.candidates_per_gt; ++c) {
      Box b = gt;
      if (cfg.box_noise > 0.0) {
        const double x1 = gt.x1 + sx * unit(rng);
        const double y1 = gt.y1 + sy * unit(rng);
        const double x2 = gt.x2 + sx * unit(rng);
        const double y2 = gt.y2 + sy * unit(rng);
        std::tie(b.x1, b.x2) = fix_interval(x1, x2);
        std::tie(b.y1, b.y2) = fix_interval(y1, y2);
      }
      inst.pred_boxes.push_back(b);
      inst.roles.push_back(Role::kPositive);
      inst.ious.push_back(iou(b, gt));
      inst.instance_ids.push_back(static_cast<int>(g));
    }
  }

  for (std::size_t k = 0; k < cfg.n_background; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      const Box b = random_box(rng, kMinBackgroundSide, kMaxBackgroundSide);
      const bool clear = std::all_of(
          inst.gt_boxes.begin(), inst.gt_boxes.end(),
          [&](const Box& gt) { return iou(b, gt) == 0.0; });
      if (clear) {
        inst.pred_boxes.push_back(b);
        placed = true;
      }
    }
    if (!placed) {
      throw ConfigError("could not place background box " + std::to_string(k) +
                        " clear of the ground truths");
    }
    inst.roles.push_back(Role::kNegative);
    inst.ious.push_back(0.0);
    inst.instance_ids.push_back(kBackground);
  }

  std::normal_distribution<double> logit(0.0, 1.0);
  for (std::size_t i = 0; i < inst.pred_boxes.size(); ++i) {
    inst.logits.push_back(cfg.logit_init.kind == LogitInit::Kind::kGaussian
                              ? cfg.logit_init.sigma * logit(rng)
                              : 0.0);
  }
  inst.validate();
  return inst;
}

}  // namespace rankpair::harness
