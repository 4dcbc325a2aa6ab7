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

#include "rankpair/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankpair/errors.h"

namespace rankpair {
namespace {

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

void check_series(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw UndefinedMetric("correlation: series differ in length");
  }
  if (x.size() < 2) throw UndefinedMetric("correlation: fewer than 2 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidArgument("correlation: non-finite value");
    }
  }
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v[0]; });
  };
  if (constant(x) || constant(y)) {
    throw UndefinedMetric("correlation: constant series");
  }
}

}  // namespace

double average_precision(std::span<const double> scores,
                         std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument("average_precision: misaligned arrays");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw InvalidArgument("average_precision: NaN score");
  }
  double hits = 0.0;
  double sum = 0.0;
  const std::vector<std::size_t> order = descending_order(scores);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (labels[order[r]] != 0) {
      hits += 1.0;
      sum += hits / static_cast<double>(r + 1);
    }
  }
  if (hits == 0.0) throw UndefinedMetric("average_precision: no positives");
  return sum / hits;
}

std::vector<double> default_iou_thresholds() {
  std::vector<double> t;
  for (int k = 0; k < 10; ++k) t.push_back((50 + 5 * k) / 100.0);
  return t;
}

EvalReport coco_style_ap(std::span<const Box> pred_boxes,
                         std::span<const double> scores,
                         std::span<const Box> gt_boxes,
                         std::span<const double> iou_thresholds) {
  if (pred_boxes.size() != scores.size()) {
    throw InvalidArgument("coco_style_ap: boxes and scores differ in length");
  }
  if (gt_boxes.empty()) throw UndefinedMetric("coco_style_ap: no ground truths");
  if (iou_thresholds.empty()) {
    throw InvalidArgument("coco_style_ap: no IoU thresholds");
  }
  for (double t : iou_thresholds) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw InvalidArgument("coco_style_ap: threshold outside (0, 1]");
    }
  }

  const std::vector<std::size_t> order = descending_order(scores);
  std::vector<std::vector<double>> overlaps(order.size());
  std::vector<double> sorted_scores;
  for (std::size_t r = 0; r < order.size(); ++r) {
    sorted_scores.push_back(scores[order[r]]);
    for (const Box& g : gt_boxes) overlaps[r].push_back(iou(pred_boxes[order[r]], g));
  }

  EvalReport report;
  for (double t : iou_thresholds) {
    std::vector<bool> taken(gt_boxes.size(), false);
    std::vector<int> labels(order.size(), 0);
    int tp = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      int best = -1;
      for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
        if (taken[g]) continue;
        if (best < 0 || overlaps[r][g] > overlaps[r][best]) {
          best = static_cast<int>(g);
        }
      }
      if (best >= 0 && overlaps[r][best] >= t) {
        taken[best] = true;
        labels[r] = 1;
        ++tp;
      }
    }
    // average_precision normalizes by matched predictions; rescale so
    // recall is measured against every ground truth.
    const double ap =
        tp == 0 ? 0.0
                : average_precision(sorted_scores, labels) * tp /
                      static_cast<double>(gt_boxes.size());
    report.ap_by_iou[t] = ap;
    report.ap += ap;
  }
  report.ap /= static_cast<double>(iou_thresholds.size());
  return report;
}

std::vector<double> fractional_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    // Ranks are 1-based; a tie block shares the mean of its positions.
    const double shared = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedMetric("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      if (dx == 0.0 || dy == 0.0) continue;
      ((dx > 0.0) == (dy > 0.0) ? concordant : discordant) += 1;
    }
  }
  const double denom = std::sqrt(static_cast<double>(pairs - ties_x) *
                                 static_cast<double>(pairs - ties_y));
  return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0,
                    1.0);
}

Correlations correlations(std::span<const double> x,
                          std::span<const double> y) {
  return {pearson(x, y), spearman(x, y), kendall_tau_b(x, y)};
}

}  // namespace rankpair
