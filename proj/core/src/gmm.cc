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

#include "rankpair/gmm.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rankpair/errors.h"

namespace rankpair {
namespace {

double coordinate_sum(const Point2& p) { return p[0] + p[1]; }

double component_log_density(const Point2& p, const Point2& mean,
                             const Point2& var) {
  double s = 0.0;
  for (int d = 0; d < 2; ++d) {
    const double diff = p[d] - mean[d];
    s += -0.5 * std::log(2.0 * std::numbers::pi * var[d]) -
         diff * diff / (2.0 * var[d]);
  }
  return s;
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -HUGE_VAL) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double total_log_likelihood(const GmmModel& m, std::span<const Point2> pts) {
  double ll = 0.0;
  for (const Point2& p : pts) ll += m.log_density(p);
  return ll;
}

}  // namespace

double GmmModel::log_density(const Point2& p) const {
  return log_sum_exp(
      std::log(weights[0]) + component_log_density(p, means[0], variances[0]),
      std::log(weights[1]) + component_log_density(p, means[1], variances[1]));
}

std::array<double, 2> GmmModel::responsibilities(const Point2& p) const {
  const double a =
      std::log(weights[0]) + component_log_density(p, means[0], variances[0]);
  const double b =
      std::log(weights[1]) + component_log_density(p, means[1], variances[1]);
  const double z = log_sum_exp(a, b);
  const double r1 = std::exp(b - z);
  return {1.0 - r1, r1};
}

GmmModel gmm_fit_two_component(std::span<const Point2> points,
                               [[maybe_unused]] std::uint64_t seed) {
  for (const Point2& p : points) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
      throw InvalidArgument("gmm: non-finite point");
    }
  }
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (coordinate_sum(points[i]) < coordinate_sum(points[lo])) lo = i;
    if (coordinate_sum(points[i]) > coordinate_sum(points[hi])) hi = i;
  }
  if (!points.empty() && points[lo] == points[hi]) {
    // Equal sums everywhere: anchor the second component on the first point
    // that differs from the first anchor.
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] != points[lo]) {
        hi = i;
        break;
      }
    }
  }
  if (points.size() < 2 || points[lo] == points[hi]) {
    throw DegenerateInput("gmm: need at least two distinct points");
  }

  const double n = static_cast<double>(points.size());
  Point2 mean{};
  for (const Point2& p : points) {
    mean[0] += p[0] / n;
    mean[1] += p[1] / n;
  }
  Point2 var{};
  for (const Point2& p : points) {
    for (int d = 0; d < 2; ++d) var[d] += (p[d] - mean[d]) * (p[d] - mean[d]) / n;
  }
  for (double& v : var) v = std::max(v, kGmmVarianceFloor);

  GmmModel m;
  m.weights = {0.5, 0.5};
  m.means = {points[lo], points[hi]};
  m.variances = {var, var};
  m.log_likelihood = total_log_likelihood(m, points);
  m.log_likelihood_trace.push_back(m.log_likelihood);

  std::vector<std::array<double, 2>> resp(points.size());
  for (int it = 1; it <= kGmmMaxIterations; ++it) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      resp[i] = m.responsibilities(points[i]);
    }
    GmmModel next = m;
    for (int k = 0; k < 2; ++k) {
      double nk = 0.0;
      Point2 mu{};
      for (std::size_t i = 0; i < points.size(); ++i) {
        nk += resp[i][k];
        mu[0] += resp[i][k] * points[i][0];
        mu[1] += resp[i][k] * points[i][1];
      }
      if (nk <= 0.0) continue;  // empty component keeps its parameters
      mu[0] /= nk;
      mu[1] /= nk;
      Point2 v{};
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (int d = 0; d < 2; ++d) {
          const double diff = points[i][d] - mu[d];
          v[d] += resp[i][k] * diff * diff;
        }
      }
      for (int d = 0; d < 2; ++d) v[d] = std::max(v[d] / nk, kGmmVarianceFloor);
      next.weights[k] = nk / n;
      next.means[k] = mu;
      next.variances[k] = v;
    }
    const double total = next.weights[0] + next.weights[1];
    next.weights = {next.weights[0] / total, next.weights[1] / total};

    const double prev = m.log_likelihood;
    m.weights = next.weights;
    m.means = next.means;
    m.variances = next.variances;
    m.log_likelihood = total_log_likelihood(m, points);
    m.log_likelihood_trace.push_back(m.log_likelihood);
    m.iterations = it;
    if (m.log_likelihood - prev < kGmmTolerance) break;
  }
  return m;
}

}  // namespace rankpair
