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

#include "rankpair/harness/trainer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankpair/assign.h"
#include "rankpair/errors.h"

namespace rankpair::harness {
namespace {

constexpr double kMinTrainedSide = 1e-6;

void keep_box_valid(Box& b) {
  if (b.x1 > b.x2) std::swap(b.x1, b.x2);
  if (b.y1 > b.y2) std::swap(b.y1, b.y2);
  if (b.x2 - b.x1 < kMinTrainedSide) b.x2 = b.x1 + kMinTrainedSide;
  if (b.y2 - b.y1 < kMinTrainedSide) b.y2 = b.y1 + kMinTrainedSide;
}

bool uses_error_driven_update(const LossConfig& loss) {
  return !loss.distance.is_ce_sigmoid() &&
         std::holds_alternative<RankSum>(loss.balance) && loss.detach_balance &&
         loss.positive_weights.empty();
}

std::optional<Correlations> positive_correlations(const DetectionInstance& inst,
                                                  double iou_threshold) {
  std::vector<double> scores;
  std::vector<double> ious;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (inst.is_positive(i) && inst.ious[i] > iou_threshold) {
      scores.push_back(sigmoid(inst.logits[i]));
      ious.push_back(inst.ious[i]);
    }
  }
  try {
    return correlations(scores, ious);
  } catch (const UndefinedMetric&) {
    return std::nullopt;
  }
}

double ranking_ap(const DetectionInstance& inst) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (inst.roles[i] == Role::kIgnored) continue;
    scores.push_back(sigmoid(inst.logits[i]));
    labels.push_back(inst.is_positive(i) ? 1 : 0);
  }
  return average_precision(scores, labels);
}

}  // namespace

double sigmoid(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

void assign_roles(DetectionInstance& inst, const ScenarioConfig& cfg) {
  if (inst.pred_boxes.empty() || inst.gt_boxes.empty()) return;

  if (cfg.assigner == AssignerKind::kPaaStar) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const int g = inst.instance_ids[i];
      inst.ious[i] = g >= 0 ? iou(inst.pred_boxes[i], inst.gt_boxes[g]) : 0.0;
    }
    std::vector<double> scores(inst.size());
    std::transform(inst.logits.begin(), inst.logits.end(), scores.begin(),
                   sigmoid);
    const AssignerOutcome out =
        paa_star_assign(scores, inst.ious, inst.instance_ids, cfg.seed);
    inst.roles = out.roles();
    return;
  }

  const AssignerOutcome out = iou_threshold_assign(
      inst.pred_boxes, inst.gt_boxes, cfg.pos_thresh, cfg.neg_thresh);
  inst.roles = out.roles();
  inst.ious = out.matched_iou;
  for (std::size_t i : out.positives) inst.instance_ids[i] = out.matched_gt[i];
}

AdaptiveNegativeSets pair_sets(const DetectionInstance& inst,
                               const ScenarioConfig& cfg) {
  return cfg.assigner == AssignerKind::kIouThreshold ? plain_negative_sets(inst)
                                                     : arps(inst);
}

LossResult ranking_step(const DetectionInstance& inst,
                        const ScenarioConfig& cfg) {
  AdaptiveNegativeSets sets = pair_sets(inst, cfg);
  if (!uses_error_driven_update(cfg.loss)) return ape_loss(inst, sets, cfg.loss);
  for (auto& [u, a_u] : sets.sets) a_u = select_pairs(u, inst, a_u, cfg.loss);
  return error_driven_gradients(inst, cfg.loss.distance, sets,
                                cfg.loss.rank_self_count);
}

TrainingTrajectory train_toy(DetectionInstance inst, const ScenarioConfig& cfg) {
  cfg.validate();
  inst.validate();
  const double lr = cfg.trainer.learning_rate;
  const double loc_weight = cfg.trainer.loc_loss_weight;
  const bool train_boxes = loc_weight > 0.0 && !inst.pred_boxes.empty() &&
                           !inst.gt_boxes.empty();

  TrainingTrajectory traj;
  for (std::size_t step = 0;; ++step) {
    assign_roles(inst, cfg);
    const std::vector<std::size_t> pos = inst.positives();
    if (pos.empty()) {
      throw ConfigError("assigner produced no positives at step " +
                        std::to_string(step));
    }

    LossResult rank = ranking_step(inst, cfg);
    double loss = rank.loss;
    double sq_norm = 0.0;
    for (double g : rank.gradient.grads) sq_norm += g * g;

    std::vector<std::array<double, 4>> box_grads;
    if (train_boxes) {
      box_grads.assign(inst.size(), {0.0, 0.0, 0.0, 0.0});
      const double scale = loc_weight / static_cast<double>(pos.size());
      double loc = 0.0;
      for (std::size_t i : pos) {
        const int g = inst.instance_ids[i];
        if (g < 0) continue;
        const GiouLossGradient r =
            giou_loss_with_gradient(inst.pred_boxes[i], inst.gt_boxes[g]);
        loc += r.loss;
        for (int k = 0; k < 4; ++k) {
          box_grads[i][k] = scale * r.d_pred[k];
          sq_norm += box_grads[i][k] * box_grads[i][k];
        }
      }
      loss += scale * loc;
    }

    if (!std::isfinite(loss) || !std::isfinite(sq_norm)) {
      throw DivergenceError(step, "non-finite loss or gradient at step " +
                                      std::to_string(step));
    }

    TrajectoryPoint pt;
    pt.step = step;
    pt.loss = loss;
    pt.grad_norm = std::sqrt(sq_norm);
    pt.ap = ranking_ap(inst);
    pt.correlations = positive_correlations(inst, cfg.corr_iou_threshold);
    traj.points.push_back(pt);

    if (step == cfg.trainer.steps) break;

    for (std::size_t i = 0; i < inst.size(); ++i) {
      inst.logits[i] -= lr * rank.gradient.grads[i];
      if (!std::isfinite(inst.logits[i])) {
        throw DivergenceError(step + 1, "non-finite logit after step " +
                                            std::to_string(step));
      }
    }
    if (train_boxes) {
      for (std::size_t i = 0; i < inst.size(); ++i) {
        Box& b = inst.pred_boxes[i];
        b.x1 -= lr * box_grads[i][0];
        b.y1 -= lr * box_grads[i][1];
        b.x2 -= lr * box_grads[i][2];
        b.y2 -= lr * box_grads[i][3];
        keep_box_valid(b);
        if (!std::isfinite(b.area())) {
          throw DivergenceError(step + 1, "non-finite box after step " +
                                              std::to_string(step));
        }
      }
    }
  }
  traj.final_state = std::move(inst);
  return traj;
}

}  // namespace rankpair::harness
