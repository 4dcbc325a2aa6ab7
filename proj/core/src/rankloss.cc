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

#include "rankpair/rankloss.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "rankpair/errors.h"

namespace rankpair {
namespace {

void check_positive(std::size_t u, const DetectionInstance& inst) {
  if (u >= inst.size()) {
    throw InvalidArgument("sample index " + std::to_string(u) +
                          " out of range");
  }
  if (!inst.is_positive(u)) {
    throw InvalidArgument("sample " + std::to_string(u) + " is not positive");
  }
}

void check_indices(std::span<const std::size_t> idx,
                   const DetectionInstance& inst) {
  for (std::size_t v : idx) {
    if (v >= inst.size()) {
      throw InvalidArgument("pair index " + std::to_string(v) +
                            " out of range");
    }
  }
}

bool ranked(const DetectionInstance& inst, std::size_t i) {
  return inst.roles[i] != Role::kIgnored;
}

}  // namespace

double GradientVector::sum() const {
  return std::accumulate(grads.begin(), grads.end(), 0.0);
}

double GradientVector::max_abs() const {
  double m = 0.0;
  for (double g : grads) m = std::max(m, std::abs(g));
  return m;
}

double GradientVector::l2_norm() const {
  double s = 0.0;
  for (double g : grads) s += g * g;
  return std::sqrt(s);
}

void LossConfig::validate() const {
  if (const auto* v = std::get_if<ValidNegativeCount>(&balance)) {
    if (!std::isfinite(v->threshold) || v->threshold < 0.0) {
      throw InvalidArgument("valid-negative threshold T must be >= 0");
    }
  }
  if (max_pairs_q && *max_pairs_q == 0) {
    throw InvalidArgument("max_pairs_q must be >= 1");
  }
  if (!detach_balance && distance.is_ce_sigmoid()) {
    throw InvalidArgument(
        "the ce_sigmoid distance requires a detached balance constant");
  }
  for (double w : positive_weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidArgument("positive weights must be finite and >= 0");
    }
  }
}

double soft_rank(std::size_t u, const DetectionInstance& inst,
                 const DistanceFunction& d, bool self_count) {
  check_positive(u, inst);
  const double pu = inst.logits[u];
  double rank = self_count ? 1.0 : 0.0;
  for (std::size_t v = 0; v < inst.size(); ++v) {
    if (v == u || !ranked(inst, v)) continue;
    rank += d.rank_value(inst.logits[v] - pu);
  }
  return rank;
}

double precision_loss(std::size_t u, const DetectionInstance& inst,
                      const DistanceFunction& d, bool self_count) {
  check_positive(u, inst);
  const double pu = inst.logits[u];
  double num = 0.0;
  for (std::size_t v = 0; v < inst.size(); ++v) {
    if (inst.is_negative(v)) num += d.value(inst.logits[v] - pu);
  }
  const double rank = soft_rank(u, inst, d, self_count);
  if (rank == 0.0) {
    if (num == 0.0) return 0.0;
    throw DegenerateDenominator("precision_loss: zero rank with false positives");
  }
  return num / rank;
}

LossResult error_driven_gradients(const DetectionInstance& inst,
                                  const DistanceFunction& d,
                                  const AdaptiveNegativeSets& pairs,
                                  bool self_count) {
  inst.validate();
  if (d.is_ce_sigmoid()) {
    throw InvalidArgument(
        "error_driven_gradients takes piecewise_step or sigmoid distances");
  }
  const std::vector<std::size_t> pos = inst.positives();
  if (pos.empty()) throw InvalidArgument("error_driven_gradients: no positives");
  const double inv_npos = 1.0 / static_cast<double>(pos.size());

  LossResult out;
  out.gradient.grads.assign(inst.size(), 0.0);
  for (std::size_t u : pos) {
    const std::vector<std::size_t>& a_u = pairs.at(u);
    check_indices(a_u, inst);
    const double pu = inst.logits[u];
    const double rank = soft_rank(u, inst, d, self_count);
    double num = 0.0;
    for (std::size_t v : a_u) num += d.value(inst.logits[v] - pu);
    if (num == 0.0) continue;
    if (rank == 0.0) {
      throw DegenerateDenominator("error_driven_gradients: zero rank");
    }
    double g_u = 0.0;
    for (std::size_t v : a_u) {
      const double e = d.value(inst.logits[v] - pu) / rank * inv_npos;
      out.gradient.grads[v] += e;
      g_u -= e;
    }
    out.gradient.grads[u] += g_u;
    out.loss += num / rank * inv_npos;
  }
  return out;
}

double balance_constant(std::size_t u, const DetectionInstance& inst,
                        std::span<const std::size_t> pairs_u,
                        const LossConfig& cfg) {
  if (const auto* v = std::get_if<ValidNegativeCount>(&cfg.balance)) {
    check_positive(u, inst);
    return static_cast<double>(
        valid_negative_filter(u, inst, pairs_u, v->threshold).size());
  }
  return soft_rank(u, inst, cfg.distance, cfg.rank_self_count);
}

PositiveTerm pairwise_error_loss(std::size_t u, const DetectionInstance& inst,
                                 std::span<const std::size_t> pairs_u,
                                 const LossConfig& cfg) {
  check_positive(u, inst);
  check_indices(pairs_u, inst);
  const DistanceFunction& d = cfg.distance;
  const double pu = inst.logits[u];

  PositiveTerm term;
  term.balance = balance_constant(u, inst, pairs_u, cfg);
  if (pairs_u.empty()) return term;

  double num = 0.0;
  for (std::size_t v : pairs_u) num += d.value(inst.logits[v] - pu);
  if (term.balance == 0.0) {
    if (num == 0.0) return term;
    throw DegenerateDenominator("pairwise_error_loss: balance constant is 0 "
                                "for positive " + std::to_string(u));
  }
  const double bc = term.balance;
  term.loss = num / bc;

  term.grads.reserve(pairs_u.size() + 1);
  double g_u = 0.0;
  for (std::size_t v : pairs_u) {
    const double g = d.derivative(inst.logits[v] - pu) / bc;
    term.grads.emplace_back(v, g);
    g_u -= g;
  }
  // Quotient-rule term through a rank-sum BC. A count BC is piecewise
  // constant and contributes nothing.
  if (!cfg.detach_balance && std::holds_alternative<RankSum>(cfg.balance) &&
      num != 0.0) {
    const double scale = -num / (bc * bc);
    for (std::size_t v = 0; v < inst.size(); ++v) {
      if (v == u || !ranked(inst, v)) continue;
      const double g = scale * d.derivative(inst.logits[v] - pu);
      term.grads.emplace_back(v, g);
      g_u -= g;
    }
  }
  term.grads.emplace_back(u, g_u);
  return term;
}

std::vector<std::size_t> valid_negative_filter(
    std::size_t u, const DetectionInstance& inst,
    std::span<const std::size_t> candidates, double threshold) {
  if (!std::isfinite(threshold) || threshold < 0.0) {
    throw InvalidArgument("valid_negative_filter: T must be >= 0");
  }
  if (u >= inst.size()) throw InvalidArgument("valid_negative_filter: bad u");
  check_indices(candidates, inst);
  std::vector<std::size_t> out;
  const double pu = inst.logits[u];
  for (std::size_t v : candidates) {
    if (inst.logits[v] - pu > threshold) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> top_q_truncate(std::size_t u,
                                        const DetectionInstance& inst,
                                        std::span<const std::size_t> candidates,
                                        std::size_t q) {
  if (q == 0) throw InvalidArgument("top_q_truncate: q must be >= 1");
  if (u >= inst.size()) throw InvalidArgument("top_q_truncate: bad u");
  check_indices(candidates, inst);
  if (candidates.size() <= q) {
    return {candidates.begin(), candidates.end()};
  }
  std::vector<std::size_t> by_score(candidates.begin(), candidates.end());
  std::nth_element(by_score.begin(), by_score.begin() + q - 1, by_score.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (inst.logits[a] != inst.logits[b]) {
                       return inst.logits[a] > inst.logits[b];
                     }
                     return a < b;
                   });
  by_score.resize(q);
  std::sort(by_score.begin(), by_score.end());
  std::vector<std::size_t> out;
  out.reserve(q);
  for (std::size_t v : candidates) {
    if (std::binary_search(by_score.begin(), by_score.end(), v)) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<std::size_t> select_pairs(std::size_t u,
                                      const DetectionInstance& inst,
                                      std::span<const std::size_t> candidates,
                                      const LossConfig& cfg) {
  std::vector<std::size_t> pairs(candidates.begin(), candidates.end());
  if (const auto* v = std::get_if<ValidNegativeCount>(&cfg.balance)) {
    pairs = valid_negative_filter(u, inst, pairs, v->threshold);
  }
  if (cfg.max_pairs_q) pairs = top_q_truncate(u, inst, pairs, *cfg.max_pairs_q);
  return pairs;
}

LossResult ape_loss(const DetectionInstance& inst,
                    const AdaptiveNegativeSets& a_sets, const LossConfig& cfg,
                    unsigned num_threads) {
  inst.validate();
  cfg.validate();
  const std::vector<std::size_t> pos = inst.positives();
  if (pos.empty()) throw InvalidArgument("ape_loss: no positives");
  if (!cfg.positive_weights.empty() &&
      cfg.positive_weights.size() != pos.size()) {
    throw InvalidArgument("positive_weights must have one entry per positive");
  }

  std::vector<PositiveTerm> terms(pos.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t u = pos[k];
      const std::vector<std::size_t> pairs =
          select_pairs(u, inst, a_sets.at(u), cfg);
      terms[k] = pairwise_error_loss(u, inst, pairs, cfg);
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(num_threads, 1, pos.size());
  if (workers == 1) {
    work(0, pos.size());
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (pos.size() + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(pos.size(), t * chunk);
      const std::size_t end = std::min(pos.size(), begin + chunk);
      threads.emplace_back([&, t, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const double inv_npos = 1.0 / static_cast<double>(pos.size());
  LossResult out;
  out.gradient.grads.assign(inst.size(), 0.0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double w =
        cfg.positive_weights.empty() ? 1.0 : cfg.positive_weights[k];
    out.loss += w * terms[k].loss;
    for (const auto& [i, g] : terms[k].grads) {
      out.gradient.grads[i] += w * g * inv_npos;
    }
  }
  out.loss *= inv_npos;
  return out;
}

}  // namespace rankpair
