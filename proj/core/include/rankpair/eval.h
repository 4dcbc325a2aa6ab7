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

// Evaluation oracles: sort-based average precision, COCO-style AP over IoU
// thresholds and rank correlations. None of these share code with the loss
// implementations they are used to check.

#ifndef RANKPAIR_EVAL_H_
#define RANKPAIR_EVAL_H_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rankpair/geometry.h"

namespace rankpair {

// All-point AP: sort by descending score (ascending index on ties) and
// average precision@rank over the positive labels. Throws UndefinedMetric
// when no label is positive.
double average_precision(std::span<const double> scores,
                         std::span<const int> labels);

// 0.50, 0.55, ..., 0.95.
std::vector<double> default_iou_thresholds();

struct Correlations {
  double pcc = 0.0;
  double scc = 0.0;
  double kcc = 0.0;
};

struct EvalReport {
  double ap = 0.0;
  std::map<double, double> ap_by_iou;
  // Absent when undefined for the evaluated set.
  std::optional<Correlations> correlations;
};

// Greedy matching per threshold: predictions in descending score order take
// the unmatched ground truth of highest IoU (lowest index on ties) if that
// IoU >= threshold, else count as false positives. AP per threshold is the
// all-point AP with recall measured against the number of ground truths.
// report.ap is the mean over thresholds. Throws UndefinedMetric with no
// ground truths.
EvalReport coco_style_ap(std::span<const Box> pred_boxes,
                         std::span<const double> scores,
                         std::span<const Box> gt_boxes,
                         std::span<const double> iou_thresholds);

double pearson(std::span<const double> x, std::span<const double> y);
// Pearson on fractional ranks (ties share their average rank).
double spearman(std::span<const double> x, std::span<const double> y);
// Tau-b, corrected for ties in either series.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);
std::vector<double> fractional_ranks(std::span<const double> v);

// Throws UndefinedMetric on length mismatch, fewer than two points or a
// constant series.
Correlations correlations(std::span<const double> x,
                          std::span<const double> y);

}  // namespace rankpair

#endif  // RANKPAIR_EVAL_H_
