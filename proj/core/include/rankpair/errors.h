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

#ifndef RANKPAIR_ERRORS_H_
#define RANKPAIR_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankpair {

// Precondition violated by the caller (bad index, non-finite input, etc).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A balance constant of zero paired with a nonzero pairwise numerator.
class DegenerateDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input too degenerate to fit a model (e.g. fewer than two distinct points).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Metric is undefined for the given input (no positives, constant series).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or out-of-range experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss or gradient.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace rankpair

#endif  // RANKPAIR_ERRORS_H_
