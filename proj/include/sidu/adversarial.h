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

// Fast-gradient-sign attacks and the two robustness experiments built on
// them: explanations of attacked images scored against human fixations, and
// against the explanation of the clean image.

#ifndef SIDU_ADVERSARIAL_H_
#define SIDU_ADVERSARIAL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sidu/explain.h"
#include "sidu/metrics.h"
#include "sidu/model.h"

namespace sidu::adversarial {

using explain::Method;

struct AttackConfig {
  double epsilon = 0.0;
  // Defaults to the model's decision on the clean image (untargeted attack).
  std::optional<int> target_class;
  double clip_min = 0.0;
  double clip_max = 1.0;

  absl::Status Validate() const;
};

// clip(image + epsilon * sign(dL/dimage)), L the cross-entropy of the target
// class. sign(0) = 0.
absl::StatusOr<Tensor> Fgsm(const model::ModelAdapter& adapter,
                            const Tensor& image, const AttackConfig& cfg);

inline const std::vector<double>& DefaultEpsilons() {
  static const std::vector<double> kEpsilons = {0.007, 0.05, 0.1};
  return kEpsilons;
}

enum class Reference { kFixationMaps, kCleanExplanations };

const char* ReferenceName(Reference ref);
absl::StatusOr<Reference> ParseReference(absl::string_view name);

struct RobustnessRecord {
  Method method = Method::kSidu;
  double epsilon = 0.0;
  double mean_kl = 0.0;
  double mean_scc = 0.0;
  double mean_auc = 0.0;

  friend bool operator==(const RobustnessRecord&, const RobustnessRecord&) = default;
};

struct RobustnessReport {
  Reference reference = Reference::kFixationMaps;
  std::vector<RobustnessRecord> records;

  const RobustnessRecord* Find(Method method, double epsilon) const;
  friend bool operator==(const RobustnessReport&, const RobustnessReport&) = default;
};

// An image with its fixations already mapped onto the image grid.
struct FixationSample {
  std::string name;
  Tensor image;
  metrics::FixationSet fixations;
};

struct RobustnessOptions {
  explain::SiduConfig sidu;
  explain::RiseConfig rise;
  metrics::FixationMetricOptions fixation;
  // Drift mode: the clean explanation's top-q pixels are the AUC positives.
  double drift_quantile = 0.1;
  double clip_min = 0.0;
  double clip_max = 1.0;
  // Threads across images; per-image work is sequential.
  int workers = 1;
};

// Mean of each metric over `rows`, summed in row order.
RobustnessRecord Summarize(Method method, double epsilon,
                           std::span<const metrics::SaliencyComparison> rows);

// Explains every sample with `method` and scores it against its fixations.
absl::StatusOr<std::vector<metrics::SaliencyComparison>> ScoreAgainstFixations(
    const model::ModelAdapter& adapter, std::span<const FixationSample> samples,
    Method method, const RobustnessOptions& options);

absl::StatusOr<RobustnessReport> RunFixationRobustness(
    const model::ModelAdapter& adapter, std::span<const FixationSample> samples,
    std::span<const Method> methods, std::span<const double> epsilons,
    const RobustnessOptions& options = {});

absl::StatusOr<RobustnessReport> RunDriftRobustness(
    const model::ModelAdapter& adapter, std::span<const Tensor> images,
    std::span<const Method> methods, double epsilon,
    const RobustnessOptions& options = {});

// Pixels at or above the k-th largest value, k = ceil(q * size). Falls back to
// exactly the first k ranked pixels when that would leave no negatives.
std::vector<bool> TopQuantileMask(const Tensor& heatmap, double q);

// Scores `explained` against `reference` used as ground truth: KL with the
// reference as FM, SCC, and AUC against the reference's top-q pixels.
absl::StatusOr<metrics::SaliencyComparison> CompareToReferenceMap(
    const Tensor& explained, const Tensor& reference, double quantile,
    double reg);

}  // namespace sidu::adversarial

#endif  // SIDU_ADVERSARIAL_H_
