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

// Experiment runs and report files.
//
//   run:   <out>/trajectory.csv   step,loss,grad_norm,ap,pcc,scc,kcc
//          <out>/summary.json     final EvalReport, config echo, version
//   sweep: <out>/sweep.csv        one row per swept value

#ifndef RANKPAIR_HARNESS_EXPERIMENT_H_
#define RANKPAIR_HARNESS_EXPERIMENT_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankpair/eval.h"
#include "rankpair/harness/config.h"
#include "rankpair/harness/trainer.h"

namespace rankpair::harness {

nlohmann::json to_json(const EvalReport& report);

std::string trajectory_csv(const TrainingTrajectory& t);

// Final-state report: COCO-style AP after NMS on sigmoid scores, and the
// correlations of the final trajectory point.
EvalReport final_report(const TrainingTrajectory& t);

struct RunResult {
  TrainingTrajectory trajectory;
  std::string csv;
  nlohmann::json summary;
};

RunResult run_scenario(const ScenarioConfig& cfg);
void run_experiment(const std::filesystem::path& config,
                    const std::filesystem::path& out_dir);

// Copy of cfg with the named parameter set to value. Setting "delta"
// switches the distance to piecewise_step; "lambda" keeps a sigmoid or
// ce_sigmoid distance and otherwise switches to ce_sigmoid.
ScenarioConfig with_parameter(const ScenarioConfig& cfg,
                              const std::string& parameter, double value);

std::string sweep_csv(const ScenarioConfig& cfg);
void run_sweep(const std::filesystem::path& config,
               const std::filesystem::path& out_dir);

// Evaluates a detections file:
//   {"detections": [{"box": [x1, y1, x2, y2], "score": s}, ...],
//    "gts": [[x1, y1, x2, y2], ...],
//    "iou_thresholds": [...],          optional, default 0.50:0.05:0.95
//    "corr_iou_threshold": 0.5}        optional
// Correlations are between detection scores and their best IoU with any
// ground truth, over detections whose IoU exceeds corr_iou_threshold.
EvalReport evaluate_detections(const nlohmann::json& input);

}  // namespace rankpair::harness

#endif  // RANKPAIR_HARNESS_EXPERIMENT_H_
