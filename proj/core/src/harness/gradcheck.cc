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

#include "rankpair/harness/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "rankpair/assign.h"

namespace rankpair::harness {
namespace {

constexpr double kErrorScaleFloor = 1e-3;

struct FrozenTerm {
  std::size_t u;
  double weight;
  double balance;
  std::vector<std::size_t> pairs;
};

double frozen_loss(const std::vector<double>& logits,
                   const std::vector<FrozenTerm>& terms,
                   const DistanceFunction& d, double inv_npos) {
  double loss = 0.0;
  for (const FrozenTerm& t : terms) {
    if (t.balance == 0.0) continue;
    double num = 0.0;
    for (std::size_t v : t.pairs) num += d.value(logits[v] - logits[t.u]);
    loss += t.weight * num / t.balance;
  }
  return loss * inv_npos;
}

}  // namespace

double gradient_error(std::span<const double> analytic,
                      std::span<const double> numeric) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
    scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
  }
  return diff / std::max(scale, kErrorScaleFloor);
}

std::vector<double> numeric_ranking_gradient(const DetectionInstance& inst,
                                             const AdaptiveNegativeSets& sets,
                                             const LossConfig& cfg,
                                             double step) {
  const std::vector<std::size_t> pos = inst.positives();
  std::vector<FrozenTerm> terms;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    FrozenTerm t;
    t.u = pos[k];
    t.weight = cfg.positive_weights.empty() ? 1.0 : cfg.positive_weights[k];
    t.pairs = select_pairs(t.u, inst, sets.at(t.u), cfg);
    t.balance = balance_constant(t.u, inst, t.pairs, cfg);
    terms.push_back(std::move(t));
  }
  const double inv_npos = 1.0 / static_cast<double>(pos.size());

  std::vector<double> logits = inst.logits;
  std::vector<double> grad(inst.size(), 0.0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double saved = logits[i];
    logits[i] = saved + step;
    const double up = frozen_loss(logits, terms, cfg.distance, inv_npos);
    logits[i] = saved - step;
    const double down = frozen_loss(logits, terms, cfg.distance, inv_npos);
    logits[i] = saved;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

std::vector<double> numeric_giou_gradient(const Box& pred, const Box& gt,
                                          double step) {
  std::vector<double> grad(4);
  for (int k = 0; k < 4; ++k) {
    Box up = pred;
    Box down = pred;
    double* u[] = {&up.x1, &up.y1, &up.x2, &up.y2};
    double* d[] = {&down.x1, &down.y1, &down.x2, &down.y2};
    *u[k] += step;
    *d[k] -= step;
    grad[k] = (giou_loss(up, gt) - giou_loss(down, gt)) / (2.0 * step);
  }
  return grad;
}

DetectionInstance random_instance(std::uint64_t seed, std::size_t max_pos,
                                  std::size_t max_neg) {
  std::mt19937_64 rng(seed);
  const std::size_t n_pos =
      std::uniform_int_distribution<std::size_t>(1, max_pos)(rng);
  const std::size_t n_neg =
      std::uniform_int_distribution<std::size_t>(0, max_neg)(rng);
  std::normal_distribution<double> logit(0.0, 1.0);
  std::uniform_real_distribution<double> quality(0.3, 1.0);

  DetectionInstance inst;
  const std::size_t n = n_pos + n_neg;
  std::vector<Role> roles(n_pos, Role::kPositive);
  roles.resize(n, Role::kNegative);
  std::shuffle(roles.begin(), roles.end(), rng);
  for (std::size_t i = 0; i < n; ++i) {
    inst.logits.push_back(logit(rng));
    inst.roles.push_back(roles[i]);
    inst.ious.push_back(roles[i] == Role::kPositive ? quality(rng) : 0.0);
    inst.instance_ids.push_back(roles[i] == Role::kPositive ? 0 : kBackground);
  }
  return inst;
}

GradCheckReport grad_check(const LossConfig& cfg, std::size_t trials,
                           std::uint64_t seed) {
  GradCheckReport report;
  report.trials = trials;
  report.ranking_checked = cfg.detach_balance;
  if (!cfg.detach_balance) {
    report.notice =
        "not differentiable through BC: ranking gradient check skipped "
        "(detach_balance is false)";
  }

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    if (report.ranking_checked) {
      const DetectionInstance inst = random_instance(rng());
      const AdaptiveNegativeSets sets = arps(inst);
      const LossResult analytic = ape_loss(inst, sets, cfg);
      const std::vector<double> numeric =
          numeric_ranking_gradient(inst, sets, cfg);
      report.ranking_max_error =
          std::max(report.ranking_max_error,
                   gradient_error(analytic.gradient.grads, numeric));
    }

    std::uniform_real_distribution<double> corner(0.0, 0.6);
    std::uniform_real_distribution<double> side(0.05, 0.4);
    std::normal_distribution<double> jitter(0.0, 0.08);
    const double gx = corner(rng), gy = corner(rng);
    const Box gt{gx, gy, gx + side(rng), gy + side(rng)};
    Box pred{gt.x1 + jitter(rng), gt.y1 + jitter(rng), gt.x2 + jitter(rng),
             gt.y2 + jitter(rng)};
    if (pred.x1 > pred.x2) std::swap(pred.x1, pred.x2);
    if (pred.y1 > pred.y2) std::swap(pred.y1, pred.y2);
    pred.x2 += 1e-3;
    pred.y2 += 1e-3;
    const GiouLossGradient g = giou_loss_with_gradient(pred, gt);
    report.giou_max_error =
        std::max(report.giou_max_error,
                 gradient_error(g.d_pred, numeric_giou_gradient(pred, gt)));
  }
  return report;
}

}  // namespace rankpair::harness
