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

#include "rankpair/instance.h"

#include <cmath>
#include <string>

#include "rankpair/errors.h"

namespace rankpair {

std::vector<std::size_t> DetectionInstance::positives() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == Role::kPositive) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> DetectionInstance::negatives() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == Role::kNegative) out.push_back(i);
  }
  return out;
}

void DetectionInstance::validate() const {
  const std::size_t n = logits.size();
  if (n == 0) throw InvalidArgument("instance has no samples");
  if (roles.size() != n || ious.size() != n || instance_ids.size() != n) {
    throw InvalidArgument("instance fields are not aligned with logits");
  }
  if (!pred_boxes.empty() && pred_boxes.size() != n) {
    throw InvalidArgument("pred_boxes is neither empty nor aligned");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(logits[i])) {
      throw InvalidArgument("non-finite logit at index " + std::to_string(i));
    }
    if (!(ious[i] >= 0.0 && ious[i] <= 1.0)) {
      throw InvalidArgument("iou outside [0, 1] at index " + std::to_string(i));
    }
    if (instance_ids[i] >= 0 &&
        !gt_boxes.empty() &&
        static_cast<std::size_t>(instance_ids[i]) >= gt_boxes.size()) {
      throw InvalidArgument("instance id out of range at index " +
                            std::to_string(i));
    }
  }
}

const std::vector<std::size_t>& AdaptiveNegativeSets::at(std::size_t u) const {
  auto it = sets.find(u);
  if (it == sets.end()) {
    throw InvalidArgument("no pair set for positive " + std::to_string(u));
  }
  return it->second;
}

std::size_t AdaptiveNegativeSets::total_pairs() const {
  std::size_t n = 0;
  for (const auto& [u, s] : sets) n += s.size();
  return n;
}

}  // namespace rankpair
