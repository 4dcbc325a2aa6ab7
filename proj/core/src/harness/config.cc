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

#include "rankpair/harness/config.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include "rankpair/errors.h"

namespace rankpair::harness {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("'") + key +
                      "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

// Accepts "name" or {"name": {fields}}.
std::pair<std::string, json> tagged(const json& j, const char* what) {
  if (j.is_string()) return {j.get<std::string>(), json::object()};
  if (j.is_object() && j.size() == 1) {
    const auto it = j.begin();
    if (!it.value().is_object()) {
      throw ConfigError(std::string(what) + " fields must be an object");
    }
    return {it.key(), it.value()};
  }
  throw ConfigError(std::string(what) +
                    " must be a string or a single-key object");
}

AssignerKind assigner_from_name(const std::string& s) {
  if (s == "iou_threshold") return AssignerKind::kIouThreshold;
  if (s == "arps") return AssignerKind::kArps;
  if (s == "paa_star") return AssignerKind::kPaaStar;
  throw ConfigError("unknown assigner '" + s + "'");
}

}  // namespace

std::string_view assigner_name(AssignerKind kind) {
  switch (kind) {
    case AssignerKind::kIouThreshold:
      return "iou_threshold";
    case AssignerKind::kArps:
      return "arps";
    case AssignerKind::kPaaStar:
      return "paa_star";
  }
  return "arps";
}

DistanceFunction distance_from_json(const json& j) {
  const auto [name, fields] = tagged(j, "distance");
  try {
    if (name == "piecewise_step") {
      reject_unknown(fields, {"delta"}, "piecewise_step");
      return PiecewiseStep{get(fields, "delta", kDefaultDelta)};
    }
    if (name == "sigmoid") {
      reject_unknown(fields, {"lambda"}, "sigmoid");
      return Sigmoid{get(fields, "lambda", kDefaultLambda)};
    }
    if (name == "ce_sigmoid") {
      reject_unknown(fields, {"lambda"}, "ce_sigmoid");
      return CeSigmoid{get(fields, "lambda", kDefaultLambda)};
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown distance '" + name + "'");
}

json to_json(const DistanceFunction& d) {
  const char* field = d.is_piecewise_step() ? "delta" : "lambda";
  return {{std::string(d.name()), {{field, d.parameter()}}}};
}

LossConfig loss_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("loss must be an object");
  reject_unknown(j,
                 {"distance", "balance", "q", "detach_balance",
                  "rank_self_count", "positive_weights"},
                 "loss");
  LossConfig cfg;
  if (j.contains("distance")) cfg.distance = distance_from_json(j.at("distance"));
  if (j.contains("balance")) {
    const auto [name, fields] = tagged(j.at("balance"), "balance");
    if (name == "rank_sum") {
      reject_unknown(fields, {}, "rank_sum");
      cfg.balance = RankSum{};
    } else if (name == "valid_neg_count") {
      reject_unknown(fields, {"T"}, "valid_neg_count");
      cfg.balance = ValidNegativeCount{get(fields, "T", kDefaultMarginThreshold)};
    } else {
      throw ConfigError("unknown balance '" + name + "'");
    }
  }
  if (j.contains("q")) {
    const json& q = j.at("q");
    if (q.is_null() || (q.is_string() && q.get<std::string>() == "unlimited")) {
      cfg.max_pairs_q.reset();
    } else {
      cfg.max_pairs_q = get_count(j, "q", kDefaultMaxPairs);
    }
  }
  cfg.detach_balance = get(j, "detach_balance", cfg.detach_balance);
  cfg.rank_self_count = get(j, "rank_self_count", cfg.rank_self_count);
  cfg.positive_weights =
      get(j, "positive_weights", std::vector<double>{});
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json to_json(const LossConfig& cfg) {
  json j;
  j["distance"] = to_json(cfg.distance);
  if (const auto* v = std::get_if<ValidNegativeCount>(&cfg.balance)) {
    j["balance"] = {{"valid_neg_count", {{"T", v->threshold}}}};
  } else {
    j["balance"] = "rank_sum";
  }
  j["q"] = cfg.max_pairs_q ? json(*cfg.max_pairs_q) : json(nullptr);
  j["detach_balance"] = cfg.detach_balance;
  j["rank_self_count"] = cfg.rank_self_count;
  if (!cfg.positive_weights.empty()) j["positive_weights"] = cfg.positive_weights;
  return j;
}

void ScenarioConfig::validate() const {
  if (n_gts < 1) throw ConfigError("n_gts must be >= 1");
  if (candidates_per_gt < 1) throw ConfigError("candidates_per_gt must be >= 1");
  if (!(std::isfinite(box_noise) && box_noise >= 0.0)) {
    throw ConfigError("box_noise must be >= 0");
  }
  if (logit_init.kind == LogitInit::Kind::kGaussian &&
      !(std::isfinite(logit_init.sigma) && logit_init.sigma >= 0.0)) {
    throw ConfigError("logit_init sigma must be >= 0");
  }
  if (!(neg_thresh >= 0.0 && neg_thresh <= pos_thresh && pos_thresh <= 1.0)) {
    throw ConfigError("need 0 <= neg_thresh <= pos_thresh <= 1");
  }
  // A zero rate is allowed: it yields a constant trajectory.
  if (!(std::isfinite(trainer.learning_rate) && trainer.learning_rate >= 0.0)) {
    throw ConfigError("learning_rate must be >= 0");
  }
  if (trainer.steps < 1) throw ConfigError("steps must be >= 1");
  if (!(std::isfinite(trainer.loc_loss_weight) && trainer.loc_loss_weight >= 0.0)) {
    throw ConfigError("loc_loss_weight must be >= 0");
  }
  if (!(corr_iou_threshold >= 0.0 && corr_iou_threshold <= 1.0)) {
    throw ConfigError("corr_iou_threshold must be in [0, 1]");
  }
  if (sweep) {
    static const std::set<std::string> kParams{"delta", "lambda", "T", "q"};
    if (!kParams.count(sweep->parameter)) {
      throw ConfigError("cannot sweep '" + sweep->parameter + "'");
    }
    if (sweep->values.empty()) throw ConfigError("sweep has no values");
  }
  try {
    loss.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ScenarioConfig scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"seed", "n_gts", "candidates_per_gt", "n_background",
                  "logit_init", "box_noise", "loss", "assigner", "pos_thresh",
                  "neg_thresh", "trainer", "corr_iou_threshold", "sweep"},
                 "config");
  ScenarioConfig cfg;
  cfg.seed = get_count(j, "seed", cfg.seed);
  cfg.n_gts = get_count(j, "n_gts", cfg.n_gts);
  cfg.candidates_per_gt = get_count(j, "candidates_per_gt", cfg.candidates_per_gt);
  cfg.n_background = get_count(j, "n_background", cfg.n_background);
  if (j.contains("logit_init")) {
    const auto [name, fields] = tagged(j.at("logit_init"), "logit_init");
    if (name == "zeros") {
      reject_unknown(fields, {}, "zeros");
      cfg.logit_init.kind = LogitInit::Kind::kZeros;
    } else if (name == "gaussian") {
      reject_unknown(fields, {"sigma"}, "gaussian");
      cfg.logit_init.kind = LogitInit::Kind::kGaussian;
      cfg.logit_init.sigma = get(fields, "sigma", 1.0);
    } else {
      throw ConfigError("unknown logit_init '" + name + "'");
    }
  }
  cfg.box_noise = get(j, "box_noise", cfg.box_noise);
  if (j.contains("loss")) cfg.loss = loss_config_from_json(j.at("loss"));
  if (j.contains("assigner")) {
    cfg.assigner = assigner_from_name(get(j, "assigner", std::string("arps")));
  }
  cfg.pos_thresh = get(j, "pos_thresh", cfg.pos_thresh);
  cfg.neg_thresh = get(j, "neg_thresh", cfg.neg_thresh);
  if (j.contains("trainer")) {
    const json& t = j.at("trainer");
    if (!t.is_object()) throw ConfigError("trainer must be an object");
    reject_unknown(t, {"learning_rate", "steps", "loc_loss_weight"}, "trainer");
    cfg.trainer.learning_rate = get(t, "learning_rate", cfg.trainer.learning_rate);
    cfg.trainer.steps = get_count(t, "steps", cfg.trainer.steps);
    cfg.trainer.loc_loss_weight =
        get(t, "loc_loss_weight", cfg.trainer.loc_loss_weight);
  }
  cfg.corr_iou_threshold = get(j, "corr_iou_threshold", cfg.corr_iou_threshold);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.is_object()) throw ConfigError("sweep must be an object");
    reject_unknown(s, {"parameter", "values"}, "sweep");
    SweepConfig sw;
    sw.parameter = get(s, "parameter", sw.parameter);
    sw.values = get(s, "values", sw.values);
    cfg.sweep = sw;
  }
  cfg.validate();
  return cfg;
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["n_gts"] = cfg.n_gts;
  j["candidates_per_gt"] = cfg.candidates_per_gt;
  j["n_background"] = cfg.n_background;
  if (cfg.logit_init.kind == LogitInit::Kind::kZeros) {
    j["logit_init"] = "zeros";
  } else {
    j["logit_init"] = {{"gaussian", {{"sigma", cfg.logit_init.sigma}}}};
  }
  j["box_noise"] = cfg.box_noise;
  j["loss"] = to_json(cfg.loss);
  j["assigner"] = std::string(assigner_name(cfg.assigner));
  j["pos_thresh"] = cfg.pos_thresh;
  j["neg_thresh"] = cfg.neg_thresh;
  j["trainer"] = {{"learning_rate", cfg.trainer.learning_rate},
                  {"steps", cfg.trainer.steps},
                  {"loc_loss_weight", cfg.trainer.loc_loss_weight}};
  j["corr_iou_threshold"] = cfg.corr_iou_threshold;
  if (cfg.sweep) {
    j["sweep"] = {{"parameter", cfg.sweep->parameter},
                  {"values", cfg.sweep->values}};
  }
  return j;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  if (const char* env = std::getenv("RANKPAIR_SEED")) {
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ConfigError(std::string("RANKPAIR_SEED is not an integer: ") + env);
    }
    if (j.is_object()) j["seed"] = seed;
  }
  return scenario_from_json(j);
}

}  // namespace rankpair::harness
