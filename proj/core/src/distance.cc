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
#include <string>

#include "rankpair/errors.h"

namespace rankpair {
namespace {

void check_slope(double p, const char* what) {
  if (!std::isfinite(p) || p <= 0.0) {
    throw InvalidArgument(std::string(what) + " must be finite and > 0, got " +
                          std::to_string(p));
  }
}

// Logistic of z, branching on sign so exp never overflows.
double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double piecewise_step(double x, double delta) {
  check_slope(delta, "delta");
  if (!std::isfinite(x)) throw InvalidArgument("piecewise_step: non-finite x");
  if (x < -delta) return 0.0;
  if (x > delta) return 1.0;
  return x / (2.0 * delta) + 0.5;
}

double piecewise_step_derivative(double x, double delta) {
  check_slope(delta, "delta");
  if (!std::isfinite(x)) throw InvalidArgument("piecewise_step: non-finite x");
  if (x <= -delta || x >= delta) return 0.0;
  return 1.0 / (2.0 * delta);
}

double sigmoid_distance(double x, double lambda) {
  check_slope(lambda, "lambda");
  if (std::isnan(x)) throw InvalidArgument("sigmoid_distance: NaN x");
  return logistic(lambda * x);
}

double sigmoid_distance_derivative(double x, double lambda) {
  check_slope(lambda, "lambda");
  if (std::isnan(x)) throw InvalidArgument("sigmoid_distance: NaN x");
  const double z = lambda * x;
  return lambda * logistic(z) * logistic(-z);
}

CeSigmoidValue ce_sigmoid_distance(double x, double lambda) {
  check_slope(lambda, "lambda");
  if (std::isnan(x)) throw InvalidArgument("ce_sigmoid_distance: NaN x");
  static const double kMaxNegLog = -std::log(kCeSigmoidFloor);
  const double z = lambda * x;
  // -log(1 - S(x)) == softplus(lambda x).
  const double neg_log = std::min(softplus(z), kMaxNegLog);
  return {neg_log / lambda, -logistic(z)};
}

DistanceFunction::DistanceFunction(Variant v) : v_(v) {
  std::visit(Overloaded{
                 [](const PiecewiseStep& p) { check_slope(p.delta, "delta"); },
                 [](const Sigmoid& s) { check_slope(s.lambda, "lambda"); },
                 [](const CeSigmoid& c) { check_slope(c.lambda, "lambda"); },
             },
             v_);
}

double DistanceFunction::value(double x) const {
  return std::visit(
      Overloaded{
          [x](const PiecewiseStep& p) { return piecewise_step(x, p.delta); },
          [x](const Sigmoid& s) { return sigmoid_distance(x, s.lambda); },
          [x](const CeSigmoid& c) {
            return ce_sigmoid_distance(x, c.lambda).value;
          },
      },
      v_);
}

double DistanceFunction::derivative(double x) const {
  return std::visit(
      Overloaded{
          [x](const PiecewiseStep& p) {
            return piecewise_step_derivative(x, p.delta);
          },
          [x](const Sigmoid& s) {
            return sigmoid_distance_derivative(x, s.lambda);
          },
          [x](const CeSigmoid& c) {
            return -ce_sigmoid_distance(x, c.lambda).grad_pu;
          },
      },
      v_);
}

double DistanceFunction::rank_value(double x) const {
  if (const auto* c = std::get_if<CeSigmoid>(&v_)) {
    return sigmoid_distance(x, c->lambda);
  }
  return value(x);
}

bool DistanceFunction::is_piecewise_step() const {
  return std::holds_alternative<PiecewiseStep>(v_);
}
bool DistanceFunction::is_sigmoid() const {
  return std::holds_alternative<Sigmoid>(v_);
}
bool DistanceFunction::is_ce_sigmoid() const {
  return std::holds_alternative<CeSigmoid>(v_);
}

std::string_view DistanceFunction::name() const {
  if (is_piecewise_step()) return "piecewise_step";
  if (is_sigmoid()) return "sigmoid";
  return "ce_sigmoid";
}

double DistanceFunction::parameter() const {
  return std::visit(Overloaded{
                        [](const PiecewiseStep& p) { return p.delta; },
                        [](const Sigmoid& s) { return s.lambda; },
                        [](const CeSigmoid& c) { return c.lambda; },
                    },
                    v_);
}

}  // namespace rankpair
