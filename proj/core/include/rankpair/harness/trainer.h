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

// Plain gradient descent on the logits (and, with a positive
// loc_loss_weight, on the predicted boxes through the GIoU loss).
//
// Each step re-runs the configured assigner on the current state:
//   iou_threshold  IoU split, every positive ranked against N
//   arps           IoU split, pairs from adaptive ranking pair selection
//   paa_star       GMM split on (score, IoU), pairs from ARPS
// The ranking gradient uses the error-driven update for piecewise_step and
// sigmoid distances with a rank-sum balance, and the analytic pairwise
// gradient otherwise.

#ifndef RANKPAIR_HARNESS_TRAINER_H_
#define RANKPAIR_HARNESS_TRAINER_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "rankpair/eval.h"
#include "rankpair/harness/config.h"
#include "rankpair/instance.h"
#include "rankpair/rankloss.h"

namespace rankpair::harness {

struct TrajectoryPoint {
  std::size_t step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  // Ranking AP of positives vs negatives, from the eval module.
  double ap = 0.0;
  // Scores vs IoUs of positives above corr_iou_threshold; empty when
  // undefined (fewer than two such positives or a constant series).
  std::optional<Correlations> correlations;
};

struct TrainingTrajectory {
  // steps + 1 entries; entry 0 is the initial state.
  std::vector<TrajectoryPoint> points;
  // State after the last recorded step, roles from the last assignment.
  DetectionInstance final_state;
};

double sigmoid(double logit);

// Refreshes ious from the boxes and applies the configured assigner.
void assign_roles(DetectionInstance& inst, const ScenarioConfig& cfg);

AdaptiveNegativeSets pair_sets(const DetectionInstance& inst,
                               const ScenarioConfig& cfg);

// Ranking loss and logit gradient for the current roles.
LossResult ranking_step(const DetectionInstance& inst,
                        const ScenarioConfig& cfg);

// Throws ConfigError when the assigner yields no positives and
// DivergenceError on a non-finite loss, gradient, logit or box.
TrainingTrajectory train_toy(DetectionInstance inst, const ScenarioConfig& cfg);

}  // namespace rankpair::harness

#endif  // RANKPAIR_HARNESS_TRAINER_H_
