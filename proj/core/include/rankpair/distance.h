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

// Distance functions applied to pairwise score differences x = P_v - P_u,
// where u is a positive sample and v a sample it is ranked against. A larger
// x means v is scored above u, so every distance is non-decreasing in x.
//
//   PiecewiseStep(delta): 0 below -delta, x / (2 delta) + 1/2 on
//       [-delta, delta], 1 above delta. Continuous; tends to the Heaviside
//       step (1/2 at the origin) as delta -> 0.
//   Sigmoid(lambda):      1 / (1 + exp(-lambda x)).
//   CeSigmoid(lambda):    -log(1 - S(x)) / lambda, i.e. the binary cross
//       entropy of S(x) against target 0, scaled by 1/lambda. Its derivative
//       with respect to x is exactly S(x).
//
// CeSigmoid clamp: 1 - S(x) is floored at kCeSigmoidFloor before the log, so
// the value never exceeds -log(1e-30) / lambda (about 69.08 / lambda). The
// reported derivative stays S(x) inside the clamped region so that the
// gradient identity with the sigmoid error-driven update holds everywhere.
//
// All functions are pure and thread-safe.

#ifndef RANKPAIR_DISTANCE_H_
#define RANKPAIR_DISTANCE_H_

#include <string>
#include <string_view>
#include <variant>

namespace rankpair {

inline constexpr double kDefaultDelta = 0.5;
inline constexpr double kDefaultLambda = 8.0;
inline constexpr double kCeSigmoidFloor = 1e-30;

double piecewise_step(double x, double delta);
// d/dx of piecewise_step: 1 / (2 delta) strictly inside (-delta, delta),
// 0 outside. The kinks at +-delta take the outer value.
double piecewise_step_derivative(double x, double delta);

double sigmoid_distance(double x, double lambda);
double sigmoid_distance_derivative(double x, double lambda);

struct CeSigmoidValue {
  double value;
  // d value / d P_u. Equals -S(x); the derivative wrt P_v is +S(x).
  double grad_pu;
};
CeSigmoidValue ce_sigmoid_distance(double x, double lambda);

struct PiecewiseStep {
  double delta = kDefaultDelta;
};
struct Sigmoid {
  double lambda = kDefaultLambda;
};
struct CeSigmoid {
  double lambda = kDefaultLambda;
};

class DistanceFunction {
 public:
  using Variant = std::variant<PiecewiseStep, Sigmoid, CeSigmoid>;

  // Defaults to CeSigmoid(8).
  DistanceFunction() : DistanceFunction(CeSigmoid{}) {}
  // Throws InvalidArgument unless the slope parameter is finite and > 0.
  DistanceFunction(Variant v);  // NOLINT(google-explicit-constructor)
  DistanceFunction(PiecewiseStep p) : DistanceFunction(Variant(p)) {}  // NOLINT
  DistanceFunction(Sigmoid s) : DistanceFunction(Variant(s)) {}        // NOLINT
  DistanceFunction(CeSigmoid c) : DistanceFunction(Variant(c)) {}      // NOLINT

  double value(double x) const;
  // d value / dx.
  double derivative(double x) const;
  // Soft count of "v is ranked above u" used by rank-sum balance constants.
  // Identical to value() except for CeSigmoid, where it is the underlying
  // sigmoid S(x); this keeps the rank denominator a count in [0, 1] per pair.
  double rank_value(double x) const;

  bool is_piecewise_step() const;
  bool is_sigmoid() const;
  bool is_ce_sigmoid() const;
  // "piecewise_step", "sigmoid" or "ce_sigmoid".
  std::string_view name() const;
  // delta for PiecewiseStep, lambda otherwise.
  double parameter() const;

  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

}  // namespace rankpair

#endif  // RANKPAIR_DISTANCE_H_
