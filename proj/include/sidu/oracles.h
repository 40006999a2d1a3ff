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

// Straight-line reference computations used to check the optimized code
// paths. Nothing here calls into explain/, metrics/ or numerics kernels; each
// routine restates its formula in the most literal form available.

#ifndef SIDU_ORACLES_H_
#define SIDU_ORACLES_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "sidu/explain.h"
#include "sidu/model.h"
#include "sidu/tensor.h"

namespace sidu::oracles {

// Bilinear resize written as a sum of tent weights over every source pixel.
Tensor TentResize(const Tensor& src, int out_h, int out_w);

// exp(-(dy^2 + dx^2) / (2 sigma^2)) around (cy, cx), unnormalized.
Tensor GaussianBump(int h, int w, int cy, int cx, double sigma);

// Weights from the similarity-difference and uniqueness definitions with
// plain nested loops.
explain::WeightVector BruteForceWeights(
    std::span<const double> p_org, const std::vector<std::vector<double>>& preds,
    double sigma, Norm norm);

// Unbatched, single-threaded explanation: threshold, upsample, mask, score
// one image at a time, weight and average in mask-index order.
absl::StatusOr<Tensor> StraightLineSidu(const model::ModelAdapter& adapter,
                                        const Tensor& image,
                                        const explain::SiduConfig& cfg);

// rank_i = #{j : v_j < v_i} + (#{j : v_j == v_i} + 1) / 2.
std::vector<double> QuadraticRanks(std::span<const double> values);
double Pearson(std::span<const double> a, std::span<const double> b);

// Probability that a random positive outscores a random negative (ties 1/2).
double PairwiseAuc(std::span<const double> scores, const std::vector<bool>& positive);

// Central difference of -ln p[target] w.r.t. input value `index`.
absl::StatusOr<double> FiniteDifferenceLoss(const model::ModelAdapter& adapter,
                                            const Tensor& image, int target,
                                            std::size_t index, double step);

}  // namespace sidu::oracles

#endif  // SIDU_ORACLES_H_
