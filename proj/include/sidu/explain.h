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

// Similarity-difference / uniqueness explanations of a classifier decision,
// plus a randomized-mask (RISE-style) baseline for comparison.
//
// Pipeline for SIDU:
//   1. threshold each last-conv feature map into a binary mask;
//   2. upsample the masks bilinearly to the input size;
//   3. score the input multiplied by each mask;
//   4. weight mask i by SD_i * U_i, where
//        SD_i = exp(-|P_org - P_i| / (2 sigma^2))
//        U_i  = sum_j |P_i - P_j|;
//   5. the explanation is (1/N) sum_i W_i * M_i.

#ifndef SIDU_EXPLAIN_H_
#define SIDU_EXPLAIN_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sidu/model.h"
#include "sidu/numerics.h"
#include "sidu/tensor.h"

namespace sidu::explain {

using model::FeatureMaps;
using model::ModelAdapter;
using model::PredictionVector;

struct SiduConfig {
  double tau = 0.5;     // Binarization threshold, in (0, 1).
  double sigma = 0.25;  // Kernel width of the similarity difference.
  Norm norm = Norm::kL2;

  absl::Status Validate() const;
};

struct RiseConfig {
  int num_masks = 2000;
  int grid = 7;
  double keep_prob = 0.5;  // In (0, 1].
  uint64_t seed = 0;

  absl::Status Validate() const;
};

enum class Method { kSidu, kRise };

const char* MethodName(Method method);
absl::StatusOr<Method> ParseMethod(absl::string_view name);

struct MaskSet {
  std::vector<Tensor> binary;     // n x n, values in {0, 1}.
  std::vector<Tensor> upsampled;  // H x W, values in [0, 1].

  int size() const { return static_cast<int>(binary.size()); }
};

struct WeightVector {
  std::vector<double> sd;
  std::vector<double> uniq;
  std::vector<double> weights;
};

struct ExplanationMap {
  Tensor heatmap;  // Raw, unnormalized saliency; H x W, entries >= 0.
  int predicted_class = 0;
  double predicted_score = 0.0;
  Method method = Method::kSidu;
  std::variant<SiduConfig, RiseConfig> config;
  WeightVector weights;  // Populated for SIDU only.
};

struct ExplainOptions {
  // Threads used to score masked images. Results do not depend on it.
  int workers = 1;
};

// Per-map min-max normalization followed by a strict `> tau` threshold. A
// constant map yields an all-zero mask.
absl::StatusOr<std::vector<Tensor>> BinarizeMaps(const FeatureMaps& fm,
                                                 double tau);

absl::StatusOr<MaskSet> BuildMaskSet(const FeatureMaps& fm, int target_h,
                                     int target_w, const SiduConfig& cfg);

// image (H x W x C) times each upsampled mask, broadcast over channels.
absl::StatusOr<std::vector<Tensor>> MaskedImages(const Tensor& image,
                                                 const MaskSet& masks);
absl::StatusOr<Tensor> ApplyMask(const Tensor& image, const Tensor& mask);

absl::StatusOr<double> SimilarityDifference(const PredictionVector& p_org,
                                            const PredictionVector& p_i,
                                            double sigma, Norm norm);

// U_i = sum_j |P_i - P_j|. Each row of distances is summed in ascending order,
// which makes U exactly equivariant under permutation of the inputs.
absl::StatusOr<std::vector<double>> Uniqueness(
    std::span<const PredictionVector> preds, Norm norm);

absl::StatusOr<WeightVector> FeatureWeights(
    const PredictionVector& p_org, std::span<const PredictionVector> preds,
    const SiduConfig& cfg);

// (1/N) sum_i weights[i] * masks[i]. Terms are accumulated in a canonical
// order (ascending weight, ties by mask contents) so the result is
// bit-identical for any permutation of the (weight, mask) pairs.
absl::StatusOr<Tensor> WeightedMaskSum(std::span<const double> weights,
                                       std::span<const Tensor> masks);

absl::StatusOr<ExplanationMap> ExplainSidu(const ModelAdapter& adapter,
                                           const Tensor& image,
                                           const SiduConfig& cfg,
                                           const ExplainOptions& options = {});

// Coarse grid x grid Bernoulli(keep_prob) masks upsampled to
// (grid + 1) * cell and cropped at a random sub-cell shift. The saliency is
// sum_m score_c(image * mask_m) * mask_m / (num_masks * keep_prob).
absl::StatusOr<ExplanationMap> ExplainRise(const ModelAdapter& adapter,
                                           const Tensor& image,
                                           const RiseConfig& cfg,
                                           const ExplainOptions& options = {});

// The masks ExplainRise uses for `cfg` at the given resolution.
absl::StatusOr<std::vector<Tensor>> RiseMasks(const RiseConfig& cfg, int height,
                                              int width);

struct MethodConfig {
  Method method = Method::kSidu;
  SiduConfig sidu;
  RiseConfig rise;
};

absl::StatusOr<ExplanationMap> Explain(const ModelAdapter& adapter,
                                       const Tensor& image,
                                       const MethodConfig& cfg,
                                       const ExplainOptions& options = {});

}  // namespace sidu::explain

#endif  // SIDU_EXPLAIN_H_
