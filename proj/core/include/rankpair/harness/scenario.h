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

#ifndef RANKPAIR_HARNESS_SCENARIO_H_
#define RANKPAIR_HARNESS_SCENARIO_H_

#include "rankpair/harness/config.h"
#include "rankpair/instance.h"

namespace rankpair::harness {

// Builds a synthetic image on the unit square, deterministic in cfg.seed.
//
// Ground truths have sides in [0.1, 0.4]. Each gets candidates_per_gt
// candidate boxes whose corners are jittered by N(0, box_noise * side);
// candidates start Positive with their IoU against the generating ground
// truth. n_background boxes are placed by rejection sampling so they do not
// overlap any ground truth (IoU 0) and start Negative. Throws ConfigError if
// a background box cannot be placed in 1000 attempts.
DetectionInstance generate_instance(const ScenarioConfig& cfg);

}  // namespace rankpair::harness

#endif  // RANKPAIR_HARNESS_SCENARIO_H_
