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

// Evaluation metrics for saliency maps.
//
// Causal metrics replace (deletion) or restore (insertion) pixels in order of
// decreasing saliency and track the probability of the originally predicted
// class; the trapezoidal area under that curve summarizes faithfulness.
// Fixation metrics compare a saliency map against human eye fixations.

#ifndef SIDU_METRICS_H_
#define SIDU_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sidu/model.h"
#include "sidu/tensor.h"

namespace sidu::metrics {

enum class CurveMode { kInsertion, kDeletion };
enum class DeletionBaseline { kChannelMean, kZero };
enum class InsertionStart { kBlur, kZero };

struct CurvePoint {
  double fraction = 0.0;
  double probability = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct CausalCurve {
  std::vector<CurvePoint> points;
  double auc = 0.0;
  CurveMode mode = CurveMode::kDeletion;
  int target_class = 0;
};

struct CausalOptions {
  int steps = 100;
  DeletionBaseline baseline = DeletionBaseline::kChannelMean;
  InsertionStart start = InsertionStart::kBlur;
  double start_blur_sigma = 10.0;
  int workers = 1;
};

// Pixel indices (row-major) ordered by decreasing heatmap value; ties keep
// row-major order.
std::vector<int> RankPixels(const Tensor& heatmap);

// Number of pixels touched at step k of `steps`: floor(k * total / steps).
int PixelsAtStep(int k, int steps, int total);

// The steps + 1 probe images of each curve, probe k at fraction k / steps.
absl::StatusOr<std::vector<Tensor>> DeletionProbes(const Tensor& image,
                                                   const Tensor& heatmap,
                                                   int steps,
                                                   DeletionBaseline baseline);
absl::StatusOr<std::vector<Tensor>> InsertionProbes(const Tensor& image,
                                                    const Tensor& heatmap,
                                                    int steps,
                                                    InsertionStart start,
                                                    double blur_sigma = 10.0);

absl::StatusOr<CausalCurve> DeletionCurve(const model::ModelAdapter& adapter,
                                          const Tensor& image,
                                          const Tensor& heatmap,
                                          const CausalOptions& options = {});
absl::StatusOr<CausalCurve> InsertionCurve(const model::ModelAdapter& adapter,
                                           const Tensor& image,
                                           const Tensor& heatmap,
                                           const CausalOptions& options = {});

// Trapezoidal area; fractions must increase strictly from 0 to 1.
absl::StatusOr<double> CurveAuc(std::span<const CurvePoint> points);

struct Fixation {
  std::string subject;
  int x = 0;
  int y = 0;
};

struct FixationSet {
  std::string image;
  int width = 0;
  int height = 0;
  std::vector<Fixation> points;

  absl::Status Validate() const;
};

// Parses {"image", "width", "height", "fixations": [{"subject", "x", "y"}]}.
absl::StatusOr<FixationSet> ParseFixationJson(absl::string_view text);
absl::StatusOr<FixationSet> LoadFixationFile(const std::string& path);
std::string FixationJson(const FixationSet& fx);

// Maps fixations onto a width x height grid: x' = floor(x * width / fx.width).
absl::StatusOr<FixationSet> RescaleFixations(const FixationSet& fx, int width,
                                             int height);

// Default blur: 24 px at 224 px width, scaled proportionally.
double DefaultFixationSigma(int width);

// Unit impulse per fixation (all subjects), Gaussian blur, min-max to [0, 1].
absl::StatusOr<Tensor> FixationsToHeatmap(const FixationSet& fx,
                                          double sigma_px);

// ROC AUC of `saliency` as a classifier of positive pixels. Thresholds sweep
// the distinct saliency values; a pixel is predicted positive when its value
// is >= the threshold.
absl::StatusOr<double> RocAuc(const Tensor& saliency,
                              const std::vector<bool>& positive);
// Positives are the fixated pixels.
absl::StatusOr<double> AucFixation(const Tensor& saliency,
                                   const FixationSet& fx);

// KL(FM || EM) after normalizing each map by (sum + reg):
//   sum_x FM(x) ln((FM(x) + reg) / (EM(x) + reg)), skipping FM(x) = 0.
// The regularizer sits on both sides of the ratio so identical maps score
// exactly 0.
absl::StatusOr<double> KlDiv(const Tensor& fm, const Tensor& em,
                             double reg = 1e-7);

// Spearman correlation: average ranks for ties, then Pearson of the ranks.
absl::StatusOr<double> Scc(const Tensor& em, const Tensor& fm);

// Average (1-based) ranks with ties sharing their mean rank.
std::vector<double> AverageRanks(std::span<const double> values);

struct SaliencyComparison {
  double auc = 0.0;
  double kl_div = 0.0;
  double scc = 0.0;
};

struct FixationMetricOptions {
  double sigma_px = 0.0;  // <= 0 selects DefaultFixationSigma.
  double reg = 1e-7;
};

// Scores `em` against `fx` (already in em's pixel grid) with all three metrics.
absl::StatusOr<SaliencyComparison> CompareToFixations(
    const Tensor& em, const FixationSet& fx,
    const FixationMetricOptions& options = {});

}  // namespace sidu::metrics

#endif  // SIDU_METRICS_H_
