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

#include "rankpair/distance.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "rankpair/errors.h"

namespace rankpair {
namespace {

TEST(PiecewiseStep, Examples) {
  EXPECT_EQ(piecewise_step(-1.0, 0.5), 0.0);
  EXPECT_EQ(piecewise_step(0.0, 0.5), 0.5);
  EXPECT_EQ(piecewise_step(0.5, 0.5), 1.0);
  EXPECT_EQ(piecewise_step(-0.5, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(piecewise_step(0.25, 0.5), 0.75);
}

TEST(PiecewiseStep, RejectsBadInput) {
  EXPECT_THROW(piecewise_step(0.0, 0.0), InvalidArgument);
  EXPECT_THROW(piecewise_step(0.0, -1.0), InvalidArgument);
  EXPECT_THROW(piecewise_step(NAN, 0.5), InvalidArgument);
  EXPECT_THROW(piecewise_step(INFINITY, 0.5), InvalidArgument);
  EXPECT_THROW(DistanceFunction(PiecewiseStep{0.0}), InvalidArgument);
}

TEST(PiecewiseStep, ContinuousAtKinks) {
  for (double delta : {0.125, 0.5, 1.0}) {
    EXPECT_NEAR(piecewise_step(delta - 1e-12, delta),
                piecewise_step(delta + 1e-12, delta), 1e-9);
    EXPECT_NEAR(piecewise_step(-delta - 1e-12, delta),
                piecewise_step(-delta + 1e-12, delta), 1e-9);
  }
}

TEST(PiecewiseStep, ApproachesHeaviside) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = x(rng);
    if (std::abs(v) <= 1e-6) continue;
    EXPECT_EQ(piecewise_step(v, 1e-9), v > 0.0 ? 1.0 : 0.0);
  }
  EXPECT_EQ(piecewise_step(0.0, 1e-9), 0.5);
}

TEST(Sigmoid, Examples) {
  EXPECT_EQ(sigmoid_distance(0.0, 8.0), 0.5);
  // 1 / (1 + e^-2), evaluated at 30 digits.
  EXPECT_NEAR(sigmoid_distance(0.25, 8.0), 0.880797077977882444, 1e-15);
  EXPECT_EQ(sigmoid_distance(1e6, 8.0), 1.0);
  EXPECT_EQ(sigmoid_distance(-1e6, 8.0), 0.0);
  EXPECT_THROW(sigmoid_distance(0.0, 0.0), InvalidArgument);
}

TEST(Sigmoid, Symmetry) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = x(rng);
    for (double lambda : {2.0, 8.0, 16.0}) {
      EXPECT_NEAR(sigmoid_distance(v, lambda) + sigmoid_distance(-v, lambda),
                  1.0, 1e-12);
    }
  }
}

TEST(CeSigmoid, Examples) {
  const CeSigmoidValue at0 = ce_sigmoid_distance(0.0, 8.0);
  EXPECT_NEAR(at0.value, 0.0866433975699931637, 1e-15);
  EXPECT_EQ(at0.grad_pu, -0.5);

  const CeSigmoidValue ordered = ce_sigmoid_distance(-10.0, 8.0);
  EXPECT_NEAR(ordered.value, 0.0, 1e-30);
  EXPECT_NEAR(ordered.grad_pu, 0.0, 1e-30);

  const CeSigmoidValue v = ce_sigmoid_distance(0.3, 4.0);
  EXPECT_NEAR(v.value, 0.365820616834507797, 1e-14);
  EXPECT_NEAR(v.grad_pu, -0.768524783499017643, 1e-14);
}

TEST(CeSigmoid, ClampsInsteadOfInfinity) {
  const CeSigmoidValue v = ce_sigmoid_distance(1e6, 8.0);
  EXPECT_TRUE(std::isfinite(v.value));
  EXPECT_NEAR(v.value, -std::log(kCeSigmoidFloor) / 8.0, 1e-12);
  EXPECT_EQ(v.grad_pu, -1.0);
}

TEST(CeSigmoid, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  const double lambdas[] = {2.0, 4.0, 8.0, 16.0};
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v = x(rng);
    const double lambda = lambdas[i % 4];
    // P_u enters as x = P_v - P_u, so d/dP_u = -d/dx.
    const double fd = -(ce_sigmoid_distance(v + h, lambda).value -
                        ce_sigmoid_distance(v - h, lambda).value) /
                      (2.0 * h);
    const double analytic = ce_sigmoid_distance(v, lambda).grad_pu;
    worst = std::max(worst, std::abs(fd - analytic) /
                                std::max(std::abs(analytic), 1e-3));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(DistanceFunction, CodomainAndMonotone) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> x(-4.0, 4.0);
  const DistanceFunction fns[] = {PiecewiseStep{0.5}, Sigmoid{8.0},
                                  CeSigmoid{8.0}};
  for (const DistanceFunction& d : fns) {
    for (int i = 0; i < 1000; ++i) {
      double a = x(rng), b = x(rng);
      if (a > b) std::swap(a, b);
      EXPECT_LE(d.value(a), d.value(b)) << d.name();
      EXPECT_GE(d.value(a), 0.0);
      if (!d.is_ce_sigmoid()) EXPECT_LE(d.value(b), 1.0);
      EXPECT_GE(d.derivative(a), 0.0);
    }
  }
}

TEST(DistanceFunction, RankValueIsSigmoidForCe) {
  const DistanceFunction ce = CeSigmoid{4.0};
  EXPECT_EQ(ce.rank_value(0.2), sigmoid_distance(0.2, 4.0));
  EXPECT_EQ(ce.derivative(0.2), sigmoid_distance(0.2, 4.0));
  const DistanceFunction h = PiecewiseStep{0.5};
  EXPECT_EQ(h.rank_value(0.2), h.value(0.2));
  EXPECT_EQ(h.name(), "piecewise_step");
  EXPECT_EQ(h.parameter(), 0.5);
  EXPECT_EQ(DistanceFunction().name(), "ce_sigmoid");
}

}  // namespace
}  // namespace rankpair
