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

#ifndef RANKPAIR_INSTANCE_H_
#define RANKPAIR_INSTANCE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rankpair/geometry.h"

namespace rankpair {

// Ignored samples (e.g. anchors between the IoU thresholds) take part in no
// ranking pair and no rank count.
enum class Role : std::uint8_t { kNegative = 0, kPositive = 1, kIgnored = 2 };

inline constexpr int kBackground = -1;

// One synthetic image: per-sample logits with their assigned role, the IoU
// of each sample's box with its matched ground truth and a grouping key.
struct DetectionInstance {
  std::vector<double> logits;
  std::vector<Role> roles;
  // Localization score in [0, 1]. Only read for positives.
  std::vector<double> ious;
  // Ground-truth index each sample belongs to, kBackground for none.
  std::vector<int> instance_ids;
  // Optional, used by the harness. Either empty or aligned with logits.
  std::vector<Box> pred_boxes;
  std::vector<Box> gt_boxes;

  std::size_t size() const { return logits.size(); }
  bool is_positive(std::size_t i) const { return roles[i] == Role::kPositive; }
  bool is_negative(std::size_t i) const { return roles[i] == Role::kNegative; }

  std::vector<std::size_t> positives() const;
  std::vector<std::size_t> negatives() const;

  // Throws InvalidArgument on misaligned or out-of-range fields.
  void validate() const;
};

// For every positive u, the ordered list of samples u is ranked against.
struct AdaptiveNegativeSets {
  std::map<std::size_t, std::vector<std::size_t>> sets;

  // Throws InvalidArgument if u has no entry.
  const std::vector<std::size_t>& at(std::size_t u) const;
  std::size_t total_pairs() const;
};

}  // namespace rankpair

#endif  // RANKPAIR_INSTANCE_H_
