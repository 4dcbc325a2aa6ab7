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

#include "rankpair/harness/experiment.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rankpair/errors.h"
#include "rankpair/geometry.h"
#include "rankpair/harness/scenario.h"
#include "rankpair/version.h"

namespace rankpair::harness {
namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string threshold_key(double t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", t);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void append_correlations(std::ostringstream& os,
                         const std::optional<Correlations>& c) {
  if (c) {
    os << ',' << num(c->pcc) << ',' << num(c->scc) << ',' << num(c->kcc);
  } else {
    os << ",,,";
  }
}

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw ConfigError("a box must be an array [x1, y1, x2, y2]");
  }
  const Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
              j[3].get<double>()};
  if (!b.valid()) throw ConfigError("invalid box " + j.dump());
  return b;
}

}  // namespace

json to_json(const EvalReport& report) {
  json j;
  j["ap"] = report.ap;
  json by_iou = json::object();
  for (const auto& [t, ap] : report.ap_by_iou) by_iou[threshold_key(t)] = ap;
  j["ap_by_iou"] = by_iou;
  if (report.correlations) {
    j["pcc"] = report.correlations->pcc;
    j["scc"] = report.correlations->scc;
    j["kcc"] = report.correlations->kcc;
  } else {
    j["pcc"] = nullptr;
    j["scc"] = nullptr;
    j["kcc"] = nullptr;
  }
  return j;
}

std::string trajectory_csv(const TrainingTrajectory& t) {
  std::ostringstream os;
  os << "step,loss,grad_norm,ap,pcc,scc,kcc\n";
  for (const TrajectoryPoint& p : t.points) {
    os << p.step << ',' << num(p.loss) << ',' << num(p.grad_norm) << ','
       << num(p.ap);
    append_correlations(os, p.correlations);
    os << '\n';
  }
  return os.str();
}

EvalReport final_report(const TrainingTrajectory& t) {
  EvalReport report;
  const DetectionInstance& s = t.final_state;
  if (!t.points.empty()) report.correlations = t.points.back().correlations;
  if (s.gt_boxes.empty() || s.pred_boxes.empty()) return report;

  std::vector<double> scores(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) scores[i] = sigmoid(s.logits[i]);
  const std::vector<std::size_t> kept = nms(s.pred_boxes, scores);
  std::vector<Box> boxes;
  std::vector<double> kept_scores;
  for (std::size_t i : kept) {
    boxes.push_back(s.pred_boxes[i]);
    kept_scores.push_back(scores[i]);
  }
  const std::vector<double> thresholds = default_iou_thresholds();
  const EvalReport coco = coco_style_ap(boxes, kept_scores, s.gt_boxes, thresholds);
  report.ap = coco.ap;
  report.ap_by_iou = coco.ap_by_iou;
  return report;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  RunResult r;
  r.trajectory = train_toy(generate_instance(cfg), cfg);
  r.csv = trajectory_csv(r.trajectory);
  const TrajectoryPoint& last = r.trajectory.points.back();
  r.summary["version"] = kVersion;
  r.summary["config"] = to_json(cfg);
  r.summary["final"] = to_json(final_report(r.trajectory));
  r.summary["final_loss"] = last.loss;
  r.summary["ranking_ap"] = last.ap;
  r.summary["steps"] = cfg.trainer.steps;
  return r;
}

void run_experiment(const std::filesystem::path& config,
                    const std::filesystem::path& out_dir) {
  const ScenarioConfig cfg = load_scenario(config);
  const RunResult r = run_scenario(cfg);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "trajectory.csv", r.csv);
  write_file(out_dir / "summary.json", r.summary.dump(2) + "\n");
}

ScenarioConfig with_parameter(const ScenarioConfig& cfg,
                              const std::string& parameter, double value) {
  ScenarioConfig out = cfg;
  try {
    if (parameter == "delta") {
      out.loss.distance = PiecewiseStep{value};
    } else if (parameter == "lambda") {
      if (cfg.loss.distance.is_sigmoid()) {
        out.loss.distance = Sigmoid{value};
      } else {
        out.loss.distance = CeSigmoid{value};
      }
    } else if (parameter == "T") {
      out.loss.balance = ValidNegativeCount{value};
    } else if (parameter == "q") {
      if (!(value >= 1.0) || std::floor(value) != value) {
        throw ConfigError("q must be a positive integer");
      }
      out.loss.max_pairs_q = static_cast<std::size_t>(value);
    } else {
      throw ConfigError("cannot sweep '" + parameter + "'");
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  out.validate();
  return out;
}

std::string sweep_csv(const ScenarioConfig& cfg) {
  const SweepConfig sweep = cfg.sweep.value_or(SweepConfig{});
  std::ostringstream os;
  os << "parameter,value,final_loss,final_ap,pcc,scc,kcc\n";
  for (double v : sweep.values) {
    const RunResult r = run_scenario(with_parameter(cfg, sweep.parameter, v));
    const TrajectoryPoint& last = r.trajectory.points.back();
    os << sweep.parameter << ',' << num(v) << ',' << num(last.loss) << ','
       << num(last.ap);
    append_correlations(os, last.correlations);
    os << '\n';
  }
  return os.str();
}

void run_sweep(const std::filesystem::path& config,
               const std::filesystem::path& out_dir) {
  const std::string csv = sweep_csv(load_scenario(config));
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "sweep.csv", csv);
}

EvalReport evaluate_detections(const json& input) {
  try {
    if (!input.is_object() || !input.contains("detections") ||
        !input.contains("gts")) {
      throw ConfigError("eval input needs 'detections' and 'gts'");
    }
    std::vector<Box> boxes;
    std::vector<double> scores;
    for (const json& d : input.at("detections")) {
      boxes.push_back(box_from_json(d.at("box")));
      scores.push_back(d.at("score").get<double>());
    }
    std::vector<Box> gts;
    for (const json& g : input.at("gts")) gts.push_back(box_from_json(g));
    const std::vector<double> thresholds =
        input.value("iou_thresholds", default_iou_thresholds());
    const double corr_threshold = input.value("corr_iou_threshold", 0.5);

    EvalReport report = coco_style_ap(boxes, scores, gts, thresholds);
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      double best = 0.0;
      for (const Box& g : gts) best = std::max(best, iou(boxes[i], g));
      if (best > corr_threshold) {
        xs.push_back(scores[i]);
        ys.push_back(best);
      }
    }
    try {
      report.correlations = correlations(xs, ys);
    } catch (const UndefinedMetric&) {
      report.correlations.reset();
    }
    return report;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed eval input: ") + e.what());
  }
}

}  // namespace rankpair::harness
