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

// The model boundary. Explanation code sees a classifier only through
// ModelAdapter: probability vectors, last-convolution feature maps and,
// for attacks, input gradients.

#ifndef SIDU_MODEL_H_
#define SIDU_MODEL_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sidu/tensor.h"

namespace sidu::model {

// Probability vector over C classes.
struct PredictionVector {
  Tensor scores;
  std::vector<std::string> class_labels;  // Empty or exactly C entries.

  int num_classes() const { return static_cast<int>(scores.size()); }
  double operator[](int c) const { return scores[c]; }
  std::span<const double> values() const { return scores.data(); }
  // Index of the largest score; ties resolve to the lowest index.
  int Argmax() const;
};

// Output of the last convolution layer, n x n x N (channel-last).
struct FeatureMaps {
  Tensor maps;
  std::string layer_name;

  int side() const { return maps.dim(0); }
  int count() const { return maps.dim(2); }
};

struct AdapterCapabilities {
  bool has_gradients = false;
  int max_batch = 1;
  int height = 0;
  int width = 0;
  int channels = 0;
  int num_classes = 0;

  std::vector<int> input_dims() const { return {height, width, channels}; }
};

// Non-virtual public entry points validate arguments and outputs; subclasses
// implement the protected hooks. Implementations must be safe for concurrent
// const calls and deterministic bit-for-bit.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  virtual std::string name() const = 0;
  virtual const AdapterCapabilities& capabilities() const = 0;

  // One probability vector per image, order-preserving. The batch must not
  // exceed capabilities().max_batch; see PredictAll for larger inputs.
  absl::StatusOr<std::vector<PredictionVector>> Predict(
      std::span<const Tensor> images) const;
  absl::StatusOr<PredictionVector> PredictOne(const Tensor& image) const;

  absl::StatusOr<FeatureMaps> GetFeatureMaps(const Tensor& image) const;

  // Gradient of the cross-entropy loss -ln p[target_class] with respect to
  // every input value.
  absl::StatusOr<Tensor> InputGradient(const Tensor& image,
                                       int target_class) const;

 protected:
  virtual absl::StatusOr<std::vector<PredictionVector>> PredictBatch(
      std::span<const Tensor> images) const = 0;
  virtual absl::StatusOr<FeatureMaps> ComputeFeatureMaps(
      const Tensor& image) const = 0;
  // Default: capability unsupported.
  virtual absl::StatusOr<Tensor> ComputeInputGradient(const Tensor& image,
                                                      int target_class) const;

  absl::Status CheckImage(const Tensor& image) const;
};

// Splits `images` into max_batch chunks, scores the chunks on up to `workers`
// threads and returns predictions in input order.
absl::StatusOr<std::vector<PredictionVector>> PredictAll(
    const ModelAdapter& adapter, std::span<const Tensor> images,
    int workers = 1);

// Cross-entropy -ln p[c] with p clamped away from zero.
double CrossEntropy(const PredictionVector& p, int target_class);

}  // namespace sidu::model

#endif  // SIDU_MODEL_H_
