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

// Run configuration for the command-line tool. A single JSON document; every
// field is optional and falls back to the library defaults. Relative paths
// resolve against the directory holding the config file.

#ifndef SIDU_TOOLS_CONFIG_H_
#define SIDU_TOOLS_CONFIG_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sidu/adversarial.h"
#include "sidu/explain.h"
#include "sidu/metrics.h"
#include "sidu/model.h"

namespace sidu::cli {

enum class ModelType { kBuiltin, kFile, kQuadrant };

struct ModelConfig {
  ModelType type = ModelType::kBuiltin;
  uint64_t seed = 0;         // builtin
  std::string manifest;      // file
  int height = 224;          // file
  int width = 224;           // file
  int channels = 3;          // file
  int side = 32;             // quadrant
  int scoring_quadrant = 0;  // quadrant
};

struct MetricsConfig {
  int steps = 100;
  metrics::DeletionBaseline baseline = metrics::DeletionBaseline::kChannelMean;
  metrics::InsertionStart start = metrics::InsertionStart::kBlur;
  double start_blur_sigma = 10.0;
  double reg = 1e-7;
  double sigma_px = 0.0;  // <= 0: scaled default.
  double drift_quantile = 0.1;
};

struct AttackSection {
  std::vector<double> epsilons = adversarial::DefaultEpsilons();
  double clip_min = 0.0;
  double clip_max = 1.0;
};

struct RunConfig {
  ModelConfig model;
  std::vector<explain::Method> methods = {explain::Method::kSidu};
  explain::SiduConfig sidu;
  explain::RiseConfig rise;
  MetricsConfig metrics;
  AttackSection attack;
  std::string dataset;    // Directory of *.png inputs.
  std::string fixations;  // Directory of <stem>.json; defaults to `dataset`.
  std::string output = "out";
  int workers = 1;

  // Field ranges only; see CheckPaths for filesystem checks.
  absl::Status Validate() const;
};

absl::StatusOr<RunConfig> ParseRunConfig(const std::string& json_text,
                                         const std::string& base_dir);
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

// Sets the builtin model seed and the randomized-mask seed.
void ApplySeed(uint64_t seed, RunConfig& cfg);

// Referenced inputs must exist.
absl::Status CheckPaths(const RunConfig& cfg, bool needs_dataset);

absl::StatusOr<std::unique_ptr<model::ModelAdapter>> BuildModel(
    const ModelConfig& cfg);

explain::MethodConfig MethodConfigFor(const RunConfig& cfg,
                                      explain::Method method);
metrics::CausalOptions CausalOptionsFor(const RunConfig& cfg);
adversarial::RobustnessOptions RobustnessOptionsFor(const RunConfig& cfg);

}  // namespace sidu::cli

#endif  // SIDU_TOOLS_CONFIG_H_
