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

#include "rankpair/assign.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rankpair/errors.h"

namespace rankpair {

std::vector<Role> AssignerOutcome::roles() const {
  std::vector<Role> out(responsibilities.size(), Role::kIgnored);
  for (std::size_t i : positives) out[i] = Role::kPositive;
  for (std::size_t i : negatives) out[i] = Role::kNegative;
  return out;
}

AdaptiveNegativeSets arps(const DetectionInstance& inst) {
  inst.validate();
  AdaptiveNegativeSets out;
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (!inst.is_positive(u)) continue;
    std::vector<std::size_t>& a_u = out.sets[u];
    for (std::size_t v = 0; v < inst.size(); ++v) {
      if (v == u) continue;
      // Lower-quality positives count as adaptive false positives for u.
      if (inst.is_negative(v) ||
          (inst.is_positive(v) && inst.ious[v] < inst.ious[u])) {
        a_u.push_back(v);
      }
    }
  }
  return out;
}

AdaptiveNegativeSets plain_negative_sets(const DetectionInstance& inst) {
  inst.validate();
  AdaptiveNegativeSets out;
  const std::vector<std::size_t> neg = inst.negatives();
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (inst.is_positive(u)) out.sets[u] = neg;
  }
  return out;
}

AssignerOutcome iou_threshold_assign(std::span<const Box> anchors,
                                     std::span<const Box> gts,
                                     double pos_thresh, double neg_thresh) {
  if (!(neg_thresh >= 0.0 && neg_thresh <= pos_thresh && pos_thresh <= 1.0)) {
    throw InvalidArgument("iou_threshold_assign: need 0 <= neg <= pos <= 1");
  }
  AssignerOutcome out;
  out.responsibilities.assign(anchors.size(), {1.0, 0.0});
  out.matched_gt.assign(anchors.size(), kBackground);
  out.matched_iou.assign(anchors.size(), 0.0);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    double best = 0.0;
    int best_gt = kBackground;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double o = iou(anchors[i], gts[g]);
      if (best_gt == kBackground || o > best) {
        best = o;
        best_gt = static_cast<int>(g);
      }
    }
    out.matched_iou[i] = best;
    if (best_gt != kBackground && best >= pos_thresh) {
      out.positives.push_back(i);
      out.matched_gt[i] = best_gt;
      out.responsibilities[i] = {0.0, 1.0};
    } else if (best_gt == kBackground || best < neg_thresh) {
      out.negatives.push_back(i);
    } else {
      out.ignored.push_back(i);
    }
  }
  return out;
}

std::vector<double> normalize_per_instance(std::span<const double> values,
                                           std::span<const int> instance_ids) {
  if (values.size() != instance_ids.size()) {
    throw InvalidArgument("normalize_per_instance: misaligned arrays");
  }
  std::map<int, std::pair<double, double>> range;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidArgument("normalize_per_instance: non-finite value");
    }
    auto [it, inserted] =
        range.try_emplace(instance_ids[i], values[i], values[i]);
    if (!inserted) {
      it->second.first = std::min(it->second.first, values[i]);
      it->second.second = std::max(it->second.second, values[i]);
    }
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto [lo, hi] = range.at(instance_ids[i]);
    out[i] = hi > lo ? std::clamp((values[i] - lo) / (hi - lo), 0.0, 1.0) : 0.5;
  }
  return out;
}

AssignerOutcome paa_star_assign(std::span<const double> ranking_scores,
                                std::span<const double> localization_scores,
                                std::span<const int> instance_ids,
                                std::uint64_t seed, bool normalize) {
  const std::size_t n = ranking_scores.size();
  if (localization_scores.size() != n || instance_ids.size() != n) {
    throw InvalidArgument("paa_star_assign: misaligned arrays");
  }
  std::vector<double> rank_in(ranking_scores.begin(), ranking_scores.end());
  std::vector<double> loc_in(localization_scores.begin(),
                             localization_scores.end());
  if (normalize) {
    rank_in = normalize_per_instance(ranking_scores, instance_ids);
    loc_in = normalize_per_instance(localization_scores, instance_ids);
  }

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (instance_ids[i] >= 0) groups[instance_ids[i]].push_back(i);
  }

  AssignerOutcome out;
  out.responsibilities.assign(n, {1.0, 0.0});
  out.matched_gt.assign(n, kBackground);
  out.matched_iou.assign(n, 0.0);
  std::vector<bool> positive(n, false);

  for (const auto& [gt, members] : groups) {
    std::vector<Point2> pts;
    pts.reserve(members.size());
    for (std::size_t i : members) pts.push_back({rank_in[i], loc_in[i]});

    std::vector<Point2> distinct = pts;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    if (distinct.size() < 2) {
      std::size_t best = members.front();
      for (std::size_t i : members) {
        if (ranking_scores[i] + localization_scores[i] >
            ranking_scores[best] + localization_scores[best]) {
          best = i;
        }
      }
      positive[best] = true;
      out.responsibilities[best] = {0.0, 1.0};
      out.matched_gt[best] = gt;
      out.matched_iou[best] = localization_scores[best];
      continue;
    }

    const GmmModel model = gmm_fit_two_component(pts, seed);
    const auto& mu = model.means;
    const int pos_k = mu[1][0] + mu[1][1] >= mu[0][0] + mu[0][1] ? 1 : 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const std::size_t i = members[k];
      const auto r = model.responsibilities(pts[k]);
      out.responsibilities[i] = {r[1 - pos_k], r[pos_k]};
      if (r[pos_k] > r[1 - pos_k]) {
        positive[i] = true;
        out.matched_gt[i] = gt;
        out.matched_iou[i] = localization_scores[i];
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    (positive[i] ? out.positives : out.negatives).push_back(i);
  }
  return out;
}

}  // namespace rankpair
