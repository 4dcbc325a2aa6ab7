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

// Finite-difference checks of the analytic gradients.
//
// The ranking oracle evaluates only forward distance values. Pair lists and
// balance constants are frozen at the unperturbed logits, mirroring the
// detached balance constant, and each logit is perturbed by +-step.
//
// Error metric: ||analytic - numeric||_inf / max(scale, 1e-3) where scale is
// the larger of the two inf-norms. Below a scale of 1e-3 this is an absolute
// check: an error under 1e-6 means the vectors agree to 1e-9.

#ifndef RANKPAIR_HARNESS_GRADCHECK_H_
#define RANKPAIR_HARNESS_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankpair/geometry.h"
#include "rankpair/instance.h"
#include "rankpair/rankloss.h"

namespace rankpair::harness {

inline constexpr double kFiniteDifferenceStep = 1e-5;

double gradient_error(std::span<const double> analytic,
                      std::span<const double> numeric);

std::vector<double> numeric_ranking_gradient(
    const DetectionInstance& inst, const AdaptiveNegativeSets& sets,
    const LossConfig& cfg, double step = kFiniteDifferenceStep);

std::vector<double> numeric_giou_gradient(const Box& pred, const Box& gt,
                                          double step = kFiniteDifferenceStep);

// Random instance with 1..max_pos positives and 0..max_neg negatives,
// N(0, 1) logits and distinct positive IoUs.
DetectionInstance random_instance(std::uint64_t seed, std::size_t max_pos = 20,
                                  std::size_t max_neg = 200);

struct GradCheckReport {
  std::size_t trials = 0;
  bool ranking_checked = false;
  // Set when the ranking check was skipped.
  std::string notice;
  double ranking_max_error = 0.0;
  double giou_max_error = 0.0;
};

// APE-loss gradient (ARPS pairs) on `trials` random instances and GIoU loss
// gradient on `trials` random box pairs. The ranking check is skipped when
// cfg.detach_balance is false.
GradCheckReport grad_check(const LossConfig& cfg, std::size_t trials,
                           std::uint64_t seed = 1);

}  // namespace rankpair::harness

#endif  // RANKPAIR_HARNESS_GRADCHECK_H_
