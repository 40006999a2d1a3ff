/*
 * Copyright 2026 The SIDU Eval Authors.
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

#include "tools/config.h"

#include <filesystem>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "sidu/file_adapter.h"
#include "sidu/numerics.h"
#include "sidu/quadrant_adapter.h"
#include "sidu/reference_cnn.h"
#include "sidu/report_io.h"

namespace sidu::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

absl::Status ConfigError(absl::string_view where, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("config ", where, ": ", what));
}

absl::Status CheckKeys(const json& obj, absl::string_view where,
                       const std::set<std::string>& allowed) {
  if (!obj.is_object()) return ConfigError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      return ConfigError(where, absl::StrCat("unknown field '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::Status GetDouble(const json& obj, const char* key, absl::string_view where,
                       double& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_number()) return ConfigError(where, absl::StrCat(key, " must be a number"));
  out = obj[key].get<double>();
  return absl::OkStatus();
}

absl::Status GetInt(const json& obj, const char* key, absl::string_view where,
                    int& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_number_integer()) {
    return ConfigError(where, absl::StrCat(key, " must be an integer"));
  }
  out = obj[key].get<int>();
  return absl::OkStatus();
}

absl::Status GetSeed(const json& obj, const char* key, absl::string_view where,
                     uint64_t& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_number_unsigned()) {
    return ConfigError(where, absl::StrCat(key, " must be a non-negative integer"));
  }
  out = obj[key].get<uint64_t>();
  return absl::OkStatus();
}

absl::Status GetString(const json& obj, const char* key, absl::string_view where,
                       std::string& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_string()) return ConfigError(where, absl::StrCat(key, " must be a string"));
  out = obj[key].get<std::string>();
  return absl::OkStatus();
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

#define RETURN_IF_ERROR(expr)                  \
  do {                                         \
    if (absl::Status _s = (expr); !_s.ok()) return _s; \
  } while (false)

absl::Status ParseModel(const json& obj, const std::string& base_dir,
                        ModelConfig& m) {
  RETURN_IF_ERROR(CheckKeys(obj, "model",
                            {"type", "seed", "manifest", "height", "width",
                             "channels", "side", "scoring_quadrant"}));
  std::string type = "builtin";
  RETURN_IF_ERROR(GetString(obj, "type", "model", type));
  if (type == "builtin") {
    m.type = ModelType::kBuiltin;
  } else if (type == "file") {
    m.type = ModelType::kFile;
  } else if (type == "quadrant") {
    m.type = ModelType::kQuadrant;
  } else {
    return ConfigError("model", absl::StrCat("unknown type '", type,
                                             "' (builtin, file, quadrant)"));
  }
  RETURN_IF_ERROR(GetSeed(obj, "seed", "model", m.seed));
  RETURN_IF_ERROR(GetString(obj, "manifest", "model", m.manifest));
  m.manifest = Resolve(base_dir, m.manifest);
  RETURN_IF_ERROR(GetInt(obj, "height", "model", m.height));
  RETURN_IF_ERROR(GetInt(obj, "width", "model", m.width));
  RETURN_IF_ERROR(GetInt(obj, "channels", "model", m.channels));
  RETURN_IF_ERROR(GetInt(obj, "side", "model", m.side));
  RETURN_IF_ERROR(GetInt(obj, "scoring_quadrant", "model", m.scoring_quadrant));
  return absl::OkStatus();
}

absl::Status ParseMetrics(const json& obj, MetricsConfig& m) {
  RETURN_IF_ERROR(CheckKeys(obj, "metrics",
                            {"steps", "baseline", "start", "start_blur_sigma",
                             "reg", "sigma_px", "drift_quantile"}));
  RETURN_IF_ERROR(GetInt(obj, "steps", "metrics", m.steps));
  std::string baseline = m.baseline == metrics::DeletionBaseline::kZero ? "zero" : "channel_mean";
  RETURN_IF_ERROR(GetString(obj, "baseline", "metrics", baseline));
  if (baseline == "zero") {
    m.baseline = metrics::DeletionBaseline::kZero;
  } else if (baseline == "channel_mean") {
    m.baseline = metrics::DeletionBaseline::kChannelMean;
  } else {
    return ConfigError("metrics", "baseline must be 'channel_mean' or 'zero'");
  }
  std::string start = m.start == metrics::InsertionStart::kZero ? "zero" : "blur";
  RETURN_IF_ERROR(GetString(obj, "start", "metrics", start));
  if (start == "zero") {
    m.start = metrics::InsertionStart::kZero;
  } else if (start == "blur") {
    m.start = metrics::InsertionStart::kBlur;
  } else {
    return ConfigError("metrics", "start must be 'blur' or 'zero'");
  }
  RETURN_IF_ERROR(GetDouble(obj, "start_blur_sigma", "metrics", m.start_blur_sigma));
  RETURN_IF_ERROR(GetDouble(obj, "reg", "metrics", m.reg));
  RETURN_IF_ERROR(GetDouble(obj, "sigma_px", "metrics", m.sigma_px));
  RETURN_IF_ERROR(GetDouble(obj, "drift_quantile", "metrics", m.drift_quantile));
  return absl::OkStatus();
}

}  // namespace

absl::Status RunConfig::Validate() const {
  if (model.type == ModelType::kFile) {
    if (model.manifest.empty()) return ConfigError("model", "file model needs 'manifest'");
    if (model.height < 1 || model.width < 1 || model.channels < 1) {
      return ConfigError("model", "input dims must be positive");
    }
  }
  if (model.type == ModelType::kQuadrant) {
    if (model.side < 2) return ConfigError("model", "side must be >= 2");
    if (model.scoring_quadrant < 0 || model.scoring_quadrant > 3) {
      return ConfigError("model", "scoring_quadrant must be in 0..3");
    }
  }
  if (methods.empty()) return ConfigError("methods", "at least one method is required");
  if (absl::Status s = sidu.Validate(); !s.ok()) return ConfigError("sidu", s.message());
  if (absl::Status s = rise.Validate(); !s.ok()) return ConfigError("rise", s.message());
  if (metrics.steps < 2) return ConfigError("metrics", "steps must be >= 2");
  if (!(metrics.start_blur_sigma > 0.0)) {
    return ConfigError("metrics", "start_blur_sigma must be positive");
  }
  if (!(metrics.reg > 0.0)) return ConfigError("metrics", "reg must be positive");
  if (!(metrics.drift_quantile > 0.0 && metrics.drift_quantile < 1.0)) {
    return ConfigError("metrics", "drift_quantile must be in (0, 1)");
  }
  if (attack.epsilons.empty()) return ConfigError("attack", "epsilons must not be empty");
  for (double eps : attack.epsilons) {
    adversarial::AttackConfig a{eps, std::nullopt, attack.clip_min, attack.clip_max};
    if (absl::Status s = a.Validate(); !s.ok()) return ConfigError("attack", s.message());
  }
  if (workers < 1) return ConfigError("workers", "must be >= 1");
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> ParseRunConfig(const std::string& json_text,
                                         const std::string& base_dir) {
  const json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("config: malformed JSON");
  RETURN_IF_ERROR(CheckKeys(doc, "root",
                            {"model", "method", "methods", "sidu", "rise", "metrics",
                             "attack", "dataset", "output", "workers"}));
  RunConfig cfg;
  if (doc.contains("model")) RETURN_IF_ERROR(ParseModel(doc["model"], base_dir, cfg.model));

  if (doc.contains("method") && doc.contains("methods")) {
    return ConfigError("root", "give either 'method' or 'methods', not both");
  }
  std::vector<std::string> names;
  if (doc.contains("method")) {
    if (!doc["method"].is_string()) return ConfigError("method", "must be a string");
    names.push_back(doc["method"].get<std::string>());
  }
  if (doc.contains("methods")) {
    if (!doc["methods"].is_array()) return ConfigError("methods", "must be an array");
    for (const json& m : doc["methods"]) {
      if (!m.is_string()) return ConfigError("methods", "entries must be strings");
      names.push_back(m.get<std::string>());
    }
  }
  if (!names.empty()) {
    cfg.methods.clear();
    for (const std::string& n : names) {
      absl::StatusOr<explain::Method> m = explain::ParseMethod(n);
      if (!m.ok()) return ConfigError("methods", m.status().message());
      cfg.methods.push_back(*m);
    }
  }

  if (doc.contains("sidu")) {
    const json& s = doc["sidu"];
    RETURN_IF_ERROR(CheckKeys(s, "sidu", {"tau", "sigma", "norm"}));
    RETURN_IF_ERROR(GetDouble(s, "tau", "sidu", cfg.sidu.tau));
    RETURN_IF_ERROR(GetDouble(s, "sigma", "sidu", cfg.sidu.sigma));
    std::string norm = NormName(cfg.sidu.norm);
    RETURN_IF_ERROR(GetString(s, "norm", "sidu", norm));
    absl::StatusOr<Norm> n = ParseNorm(norm);
    if (!n.ok()) return ConfigError("sidu", n.status().message());
    cfg.sidu.norm = *n;
  }
  if (doc.contains("rise")) {
    const json& r = doc["rise"];
    RETURN_IF_ERROR(CheckKeys(r, "rise", {"num_masks", "grid", "keep_prob", "seed"}));
    RETURN_IF_ERROR(GetInt(r, "num_masks", "rise", cfg.rise.num_masks));
    RETURN_IF_ERROR(GetInt(r, "grid", "rise", cfg.rise.grid));
    RETURN_IF_ERROR(GetDouble(r, "keep_prob", "rise", cfg.rise.keep_prob));
    RETURN_IF_ERROR(GetSeed(r, "seed", "rise", cfg.rise.seed));
  }
  if (doc.contains("metrics")) RETURN_IF_ERROR(ParseMetrics(doc["metrics"], cfg.metrics));
  if (doc.contains("attack")) {
    const json& a = doc["attack"];
    RETURN_IF_ERROR(CheckKeys(a, "attack", {"epsilons", "clip_min", "clip_max"}));
    if (a.contains("epsilons")) {
      if (!a["epsilons"].is_array()) return ConfigError("attack", "epsilons must be an array");
      cfg.attack.epsilons.clear();
      for (const json& e : a["epsilons"]) {
        if (!e.is_number()) return ConfigError("attack", "epsilons must be numbers");
        cfg.attack.epsilons.push_back(e.get<double>());
      }
    }
    RETURN_IF_ERROR(GetDouble(a, "clip_min", "attack", cfg.attack.clip_min));
    RETURN_IF_ERROR(GetDouble(a, "clip_max", "attack", cfg.attack.clip_max));
  }
  if (doc.contains("dataset")) {
    const json& d = doc["dataset"];
    if (d.is_string()) {
      cfg.dataset = d.get<std::string>();
    } else {
      RETURN_IF_ERROR(CheckKeys(d, "dataset", {"images", "fixations"}));
      RETURN_IF_ERROR(GetString(d, "images", "dataset", cfg.dataset));
      RETURN_IF_ERROR(GetString(d, "fixations", "dataset", cfg.fixations));
    }
    cfg.dataset = Resolve(base_dir, cfg.dataset);
    cfg.fixations = Resolve(base_dir, cfg.fixations);
  }
  RETURN_IF_ERROR(GetString(doc, "output", "root", cfg.output));
  cfg.output = Resolve(base_dir, cfg.output);
  RETURN_IF_ERROR(GetInt(doc, "workers", "root", cfg.workers));
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return absl::NotFoundError(absl::StrCat("config ", path, ": cannot read"));
  absl::StatusOr<RunConfig> cfg =
      ParseRunConfig(*text, fs::path(path).parent_path().string());
  if (!cfg.ok()) {
    return absl::Status(cfg.status().code(),
                        absl::StrCat(path, ": ", cfg.status().message()));
  }
  return cfg;
}

void ApplySeed(uint64_t seed, RunConfig& cfg) {
  cfg.model.seed = seed;
  cfg.rise.seed = seed;
}

absl::Status CheckPaths(const RunConfig& cfg, bool needs_dataset) {
  if (cfg.model.type == ModelType::kFile && !fs::is_regular_file(cfg.model.manifest)) {
    return absl::NotFoundError(absl::StrCat("manifest not found: ", cfg.model.manifest));
  }
  if (needs_dataset) {
    if (cfg.dataset.empty()) {
      return absl::InvalidArgumentError("config: 'dataset' is required for this command");
    }
    if (!fs::is_directory(cfg.dataset)) {
      return absl::NotFoundError(absl::StrCat("dataset directory not found: ", cfg.dataset));
    }
    if (!cfg.fixations.empty() && !fs::is_directory(cfg.fixations)) {
      return absl::NotFoundError(
          absl::StrCat("fixation directory not found: ", cfg.fixations));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<model::ModelAdapter>> BuildModel(
    const ModelConfig& cfg) {
  switch (cfg.type) {
    case ModelType::kBuiltin:
      return std::unique_ptr<model::ModelAdapter>(model::BuildReferenceCnn(cfg.seed));
    case ModelType::kQuadrant: {
      model::QuadrantAdapterOptions opts;
      opts.side = cfg.side;
      opts.scoring_quadrant = cfg.scoring_quadrant;
      return std::unique_ptr<model::ModelAdapter>(
          std::make_unique<model::QuadrantAdapter>(opts));
    }
    case ModelType::kFile: {
      model::FileAdapterOptions opts;
      opts.height = cfg.height;
      opts.width = cfg.width;
      opts.channels = cfg.channels;
      absl::StatusOr<std::unique_ptr<model::FileAdapter>> a =
          model::BuildFileAdapter(cfg.manifest, opts);
      if (!a.ok()) return a.status();
      return std::unique_ptr<model::ModelAdapter>(*std::move(a));
    }
  }
  return absl::InternalError("unhandled model type");
}

explain::MethodConfig MethodConfigFor(const RunConfig& cfg,
                                      explain::Method method) {
  return {method, cfg.sidu, cfg.rise};
}

metrics::CausalOptions CausalOptionsFor(const RunConfig& cfg) {
  metrics::CausalOptions o;
  o.steps = cfg.metrics.steps;
  o.baseline = cfg.metrics.baseline;
  o.start = cfg.metrics.start;
  o.start_blur_sigma = cfg.metrics.start_blur_sigma;
  o.workers = cfg.workers;
  return o;
}

adversarial::RobustnessOptions RobustnessOptionsFor(const RunConfig& cfg) {
  adversarial::RobustnessOptions o;
  o.sidu = cfg.sidu;
  o.rise = cfg.rise;
  o.fixation.sigma_px = cfg.metrics.sigma_px;
  o.fixation.reg = cfg.metrics.reg;
  o.drift_quantile = cfg.metrics.drift_quantile;
  o.clip_min = cfg.attack.clip_min;
  o.clip_max = cfg.attack.clip_max;
  o.workers = cfg.workers;
  return o;
}

}  // namespace sidu::cli
