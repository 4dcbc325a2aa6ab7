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

// Experiment configuration and its JSON form.
//
//   {
//     "seed": 7, "n_gts": 3, "candidates_per_gt": 10, "n_background": 50,
//     "logit_init": "zeros" | {"gaussian": {"sigma": 1.0}},
//     "box_noise": 0.1,
//     "loss": {"distance": {"ce_sigmoid": {"lambda": 8}},
//              "balance": "rank_sum" | {"valid_neg_count": {"T": 0.25}},
//              "q": 100000, "detach_balance": true},
//     "assigner": "iou_threshold" | "arps" | "paa_star",
//     "pos_thresh": 0.5, "neg_thresh": 0.4,
//     "trainer": {"learning_rate": 0.5, "steps": 200, "loc_loss_weight": 0},
//     "corr_iou_threshold": 0.5,
//     "sweep": {"parameter": "delta", "values": [1, 0.5, 0.25, 0.125]}
//   }
//
// Every key is optional; unknown keys are rejected.

#ifndef RANKPAIR_HARNESS_CONFIG_H_
#define RANKPAIR_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankpair/rankloss.h"

namespace rankpair::harness {

enum class AssignerKind { kIouThreshold, kArps, kPaaStar };

struct LogitInit {
  enum class Kind { kZeros, kGaussian };
  Kind kind = Kind::kGaussian;
  double sigma = 1.0;
};

struct TrainerConfig {
  double learning_rate = 0.5;
  std::size_t steps = 200;
  double loc_loss_weight = 0.0;
};

// Parameter names: "delta", "lambda", "T", "q".
struct SweepConfig {
  std::string parameter = "delta";
  std::vector<double> values{1.0, 0.5, 0.25, 0.125};
};

struct ScenarioConfig {
  std::uint64_t seed = 7;
  std::size_t n_gts = 3;
  std::size_t candidates_per_gt = 10;
  std::size_t n_background = 50;
  LogitInit logit_init;
  double box_noise = 0.1;
  LossConfig loss;
  AssignerKind assigner = AssignerKind::kArps;
  double pos_thresh = 0.5;
  double neg_thresh = 0.4;
  TrainerConfig trainer;
  double corr_iou_threshold = 0.5;
  std::optional<SweepConfig> sweep;

  // Throws ConfigError.
  void validate() const;
};

std::string_view assigner_name(AssignerKind kind);

// All parsers throw ConfigError on malformed input.
DistanceFunction distance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DistanceFunction& d);
LossConfig loss_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LossConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& cfg);

// Reads a config file. The RANKPAIR_SEED environment variable, when set,
// overrides the seed.
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace rankpair::harness

#endif  // RANKPAIR_HARNESS_CONFIG_H_
