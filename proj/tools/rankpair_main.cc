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

// rankpair: command line front end for the experiment harness.
//
//   rankpair run --config exp.json --out out/
//   rankpair sweep --config exp.json --out out/
//   rankpair gradcheck [--config exp.json] [--trials 100] [--seed 1]
//   rankpair nms-demo [--input boxes.json]
//   rankpair eval --input detections.json
//
// Exit codes: 0 success, 1 failure (including a failed gradient check),
// 2 malformed configuration or input, 3 training diverged.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rankpair/errors.h"
#include "rankpair/geometry.h"
#include "rankpair/harness/config.h"
#include "rankpair/harness/experiment.h"
#include "rankpair/harness/gradcheck.h"

namespace {

using nlohmann::json;
using rankpair::Box;
using rankpair::ConfigError;

constexpr double kGradCheckTolerance = 1e-6;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

int gradcheck(const std::string& config, std::size_t trials,
              std::uint64_t seed) {
  rankpair::LossConfig loss;
  if (!config.empty()) loss = rankpair::harness::load_scenario(config).loss;
  const auto report = rankpair::harness::grad_check(loss, trials, seed);
  json j;
  j["trials"] = report.trials;
  j["ranking_checked"] = report.ranking_checked;
  j["ranking_max_error"] = report.ranking_max_error;
  j["giou_max_error"] = report.giou_max_error;
  if (!report.notice.empty()) j["notice"] = report.notice;
  std::cout << j.dump(2) << "\n";
  if (!report.notice.empty()) std::cerr << report.notice << "\n";
  const bool ok = report.ranking_max_error < kGradCheckTolerance &&
                  report.giou_max_error < kGradCheckTolerance;
  return ok ? 0 : 1;
}

int nms_demo(const std::string& input) {
  std::vector<Box> boxes;
  std::vector<double> scores;
  double score_thresh = rankpair::kNmsScoreThreshold;
  double iou_thresh = rankpair::kNmsIouThreshold;
  if (input.empty()) {
    // A overlaps B with IoU 0.7, C is disjoint from both.
    boxes = {{0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, 1.0, 0.7}, {2.0, 2.0, 3.0, 3.0}};
    scores = {0.9, 0.8, 0.7};
  } else {
    const json j = read_json(input);
    try {
      for (const json& b : j.at("boxes")) {
        boxes.push_back({b.at(0).get<double>(), b.at(1).get<double>(),
                         b.at(2).get<double>(), b.at(3).get<double>()});
      }
      scores = j.at("scores").get<std::vector<double>>();
      score_thresh = j.value("score_thresh", score_thresh);
      iou_thresh = j.value("iou_thresh", iou_thresh);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed nms input: ") + e.what());
    }
  }
  std::vector<std::size_t> kept;
  try {
    kept = rankpair::nms(boxes, scores, score_thresh, iou_thresh);
  } catch (const rankpair::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  std::cout << json{{"kept", kept}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise ranking losses for dense detection: toy experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::string input;
  std::size_t trials = 100;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "Train one scenario and write reports");
  run->add_option("--config", config, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Train once per swept parameter value");
  sweep->add_option("--config", config, "Scenario JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* grad = app.add_subcommand("gradcheck",
                                  "Compare analytic and finite-difference gradients");
  grad->add_option("--config", config, "Scenario JSON (only 'loss' is used)");
  grad->add_option("--trials", trials, "Random instances to check");
  grad->add_option("--seed", seed, "Seed for the random instances");

  auto* nms = app.add_subcommand("nms-demo", "Run NMS on a box file or the built-in fixture");
  nms->add_option("--input", input, "JSON with boxes, scores and thresholds");

  auto* eval = app.add_subcommand("eval", "Evaluate a detections file");
  eval->add_option("--input", input, "Detections/ground-truth JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      rankpair::harness::run_experiment(config, out_dir);
      std::cout << "wrote " << out_dir << "/trajectory.csv and "
                << out_dir << "/summary.json\n";
      return 0;
    }
    if (sweep->parsed()) {
      rankpair::harness::run_sweep(config, out_dir);
      std::cout << "wrote " << out_dir << "/sweep.csv\n";
      return 0;
    }
    if (grad->parsed()) return gradcheck(config, trials, seed);
    if (nms->parsed()) return nms_demo(input);
    if (eval->parsed()) {
      const auto report = rankpair::harness::evaluate_detections(read_json(input));
      std::cout << rankpair::harness::to_json(report).dump(2) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rankpair::DivergenceError& e) {
    std::cerr << "diverged at step " << e.step() << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
