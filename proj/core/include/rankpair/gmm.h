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

// Two-component, diagonal-covariance Gaussian mixture in two dimensions,
// fitted by EM.
//
// Initialization is deterministic: component 0 starts at the point with the
// smallest coordinate sum, component 1 at the point with the largest (lowest
// index on ties), with equal weights and the per-dimension sample variance.
// Variances are floored at kGmmVarianceFloor in every M-step. EM stops when
// the log-likelihood improves by less than kGmmTolerance or after
// kGmmMaxIterations iterations.

#ifndef RANKPAIR_GMM_H_
#define RANKPAIR_GMM_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace rankpair {

using Point2 = std::array<double, 2>;

inline constexpr double kGmmVarianceFloor = 1e-6;
inline constexpr double kGmmTolerance = 1e-6;
inline constexpr int kGmmMaxIterations = 100;

struct GmmModel {
  std::array<double, 2> weights{};
  std::array<Point2, 2> means{};
  std::array<Point2, 2> variances{};
  double log_likelihood = 0.0;
  int iterations = 0;
  // Log-likelihood after initialization and after every EM iteration.
  std::vector<double> log_likelihood_trace;

  // Posterior probability of each component for p. Sums to 1.
  std::array<double, 2> responsibilities(const Point2& p) const;
  double log_density(const Point2& p) const;
};

// Throws DegenerateInput when there are fewer than two distinct points.
// The seed is accepted for interface stability; the fit itself is
// deterministic and does not consume randomness.
GmmModel gmm_fit_two_component(std::span<const Point2> points,
                               std::uint64_t seed = 0);

}  // namespace rankpair

#endif  // RANKPAIR_GMM_H_
