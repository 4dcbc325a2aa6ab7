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

// Positive/negative assignment and ranking-pair selection.

#ifndef RANKPAIR_ASSIGN_H_
#define RANKPAIR_ASSIGN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankpair/geometry.h"
#include "rankpair/gmm.h"
#include "rankpair/instance.h"

namespace rankpair {

// Adaptive ranking pair selection. For every positive u,
//   A_u = {v in P : v != u, iou_v < iou_u}  union  N
// in ascending index order. Positives with lower localization quality are
// ranked against u as if they were false positives.
AdaptiveNegativeSets arps(const DetectionInstance& inst);

// A_u = N for every positive (the plain pairwise error).
AdaptiveNegativeSets plain_negative_sets(const DetectionInstance& inst);

struct AssignerOutcome {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  // Samples in neither set (IoU between the two thresholds).
  std::vector<std::size_t> ignored;
  // Per-sample {negative, positive} responsibility; each pair sums to 1.
  std::vector<std::array<double, 2>> responsibilities;
  // Matched ground truth per sample, kBackground when unmatched.
  std::vector<int> matched_gt;
  // IoU with the matched ground truth (0 when unmatched).
  std::vector<double> matched_iou;

  // Roles aligned with the samples.
  std::vector<Role> roles() const;
};

inline constexpr double kDefaultPosThreshold = 0.5;
inline constexpr double kDefaultNegThreshold = 0.4;

// Anchor-style split: Positive iff best IoU >= pos_thresh (matched to the
// arg-max ground truth, lowest index on ties), Negative iff best IoU <
// neg_thresh, ignored otherwise. With no ground truths everything is
// Negative.
AssignerOutcome iou_threshold_assign(std::span<const Box> anchors,
                                     std::span<const Box> gts,
                                     double pos_thresh = kDefaultPosThreshold,
                                     double neg_thresh = kDefaultNegThreshold);

// Min-max normalization within each group of equal instance id. A group
// whose values are all equal maps to 0.5.
std::vector<double> normalize_per_instance(std::span<const double> values,
                                           std::span<const int> instance_ids);

// Probabilistic assignment on (ranking score, localization score) pairs.
// Samples with instance id kBackground are Negative. For each ground truth
// the candidates' two scores are normalized per instance (unless normalize
// is false), a two-component GMM is fitted, the component with the larger
// mean coordinate sum is taken as the positive cluster and each candidate
// goes to the cluster of larger responsibility (ties go negative). A group
// with fewer than two distinct points falls back to making the candidate
// with the highest combined score Positive and the rest Negative.
AssignerOutcome paa_star_assign(std::span<const double> ranking_scores,
                                std::span<const double> localization_scores,
                                std::span<const int> instance_ids,
                                std::uint64_t seed = 0, bool normalize = true);

}  // namespace rankpair

#endif  // RANKPAIR_ASSIGN_H_
