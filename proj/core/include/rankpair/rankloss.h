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

// Ranking losses over a DetectionInstance.
//
// For a positive u, the soft rank of u among the non-ignored samples is
//
//   rank(u) = 1 + sum_{v in P, v != u} R(P_v - P_u) + sum_{v in N} R(P_v - P_u)
//
// where R is DistanceFunction::rank_value. The leading 1 counts u itself so
// that a positive ranked above everything has precision loss 0 instead of
// 0/0; LossConfig::rank_self_count turns it off.
//
// The pairwise error of u over a pair list A_u with balance constant BC is
//
//   L(u) = (1 / BC) * sum_{v in A_u} D(P_v - P_u),
//
// which is non-negative and shrinks as u moves above the samples in A_u.
// Losses and gradients reported for a whole instance are of the mean over
// positives, so per-positive gradients are scaled by 1 / N_pos.

#ifndef RANKPAIR_RANKLOSS_H_
#define RANKPAIR_RANKLOSS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "rankpair/distance.h"
#include "rankpair/instance.h"

namespace rankpair {

inline constexpr double kDefaultMarginThreshold = 0.25;
inline constexpr std::size_t kDefaultMaxPairs = 100000;

// BC = rank(u).
struct RankSum {};
// BC = #{v in A_u : P_v - P_u > threshold}.
struct ValidNegativeCount {
  double threshold = kDefaultMarginThreshold;
};
using BalanceConstant = std::variant<RankSum, ValidNegativeCount>;

struct GradientVector {
  std::vector<double> grads;

  double sum() const;
  double max_abs() const;
  double l2_norm() const;
};

struct LossResult {
  double loss = 0.0;
  GradientVector gradient;
};

struct LossConfig {
  DistanceFunction distance;  // CeSigmoid(8)
  BalanceConstant balance = RankSum{};
  // Keep at most this many pairs per positive; nullopt is unlimited.
  std::optional<std::size_t> max_pairs_q = kDefaultMaxPairs;
  // Treat BC as a constant when differentiating. Must be true for CeSigmoid.
  bool detach_balance = true;
  bool rank_self_count = true;
  // Optional per-positive weight, aligned with the positives in ascending
  // index order. Empty means every weight is 1.
  std::vector<double> positive_weights;

  // Throws InvalidArgument.
  void validate() const;
};

// Contribution of a single positive u: its loss term and the sparse gradient
// of that term (not yet divided by N_pos).
struct PositiveTerm {
  double loss = 0.0;
  double balance = 0.0;
  std::vector<std::pair<std::size_t, double>> grads;
};

// rank(u) with the given distance; see the file comment.
double soft_rank(std::size_t u, const DetectionInstance& inst,
                 const DistanceFunction& d, bool self_count = true);

// 1 - precision of positive u: sum_{v in N} D / rank(u).
double precision_loss(std::size_t u, const DetectionInstance& inst,
                      const DistanceFunction& d, bool self_count = true);

// Error-driven update. For each positive u and v in pairs(u), with
// e = D(P_v - P_u) / rank(u): g_u -= e, g_v += e. D must be PiecewiseStep
// or Sigmoid. The loss is the mean over positives of
// sum_{v in pairs(u)} D / rank(u), which is the mean precision loss when
// pairs(u) is the negative set.
LossResult error_driven_gradients(const DetectionInstance& inst,
                                  const DistanceFunction& d,
                                  const AdaptiveNegativeSets& pairs,
                                  bool self_count = true);

// Balance constant of u under cfg.balance for the given pair list.
double balance_constant(std::size_t u, const DetectionInstance& inst,
                        std::span<const std::size_t> pairs_u,
                        const LossConfig& cfg);

// Pairwise error of positive u over pairs_u (already filtered/truncated).
// Throws DegenerateDenominator when BC is 0 and the numerator is not.
PositiveTerm pairwise_error_loss(std::size_t u, const DetectionInstance& inst,
                                 std::span<const std::size_t> pairs_u,
                                 const LossConfig& cfg);

// Keeps v iff P_v - P_u > threshold, preserving order.
std::vector<std::size_t> valid_negative_filter(
    std::size_t u, const DetectionInstance& inst,
    std::span<const std::size_t> candidates, double threshold);

// The q candidates with the highest logits (lower index wins ties), returned
// in their original order. Identity when candidates.size() <= q.
std::vector<std::size_t> top_q_truncate(std::size_t u,
                                        const DetectionInstance& inst,
                                        std::span<const std::size_t> candidates,
                                        std::size_t q);

// The pair list ape_loss actually evaluates for u: the margin filter when
// cfg.balance is ValidNegativeCount, then top-Q truncation.
std::vector<std::size_t> select_pairs(std::size_t u,
                                      const DetectionInstance& inst,
                                      std::span<const std::size_t> candidates,
                                      const LossConfig& cfg);

// Mean over positives of w_u * pairwise_error_loss(u, select_pairs(A_u)).
// Per-positive terms may be evaluated on up to num_threads threads; they are
// reduced in positive-index order so the result does not depend on it.
LossResult ape_loss(const DetectionInstance& inst,
                    const AdaptiveNegativeSets& a_sets, const LossConfig& cfg,
                    unsigned num_threads = 1);

}  // namespace rankpair

#endif  // RANKPAIR_RANKLOSS_H_
