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

#ifndef SIDU_REFERENCE_CNN_H_
#define SIDU_REFERENCE_CNN_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "sidu/model.h"

namespace sidu::model {

struct ReferenceCnnOptions {
  // Every bias is set to this value after its PRNG draw is consumed.
  double bias = 0.05;
  int max_batch = 64;
};

// Small fixed CNN used as a deterministic, gradient-capable stand-in model:
//
//   32x32x3 -> conv3x3(8, pad 1) -> ReLU -> maxpool 2x2
//           -> conv3x3(16, pad 1) -> ReLU       (last conv layer, 16x16x16)
//           -> global average pool -> dense(10) -> softmax
//
// Weights are uniform(-0.1, 0.1) drawn from SplitMix64(seed) in the order
// conv1 kernels, conv1 biases, conv2 kernels, conv2 biases, dense weights,
// dense biases. Kernels are laid out [out][in][ky][kx], dense weights
// [out][in], all row-major.
class ReferenceCnn : public ModelAdapter {
 public:
  static constexpr int kInputSide = 32;
  static constexpr int kInputChannels = 3;
  static constexpr int kConv1Channels = 8;
  static constexpr int kConv2Channels = 16;
  static constexpr int kFeatureSide = 16;
  static constexpr int kNumClasses = 10;
  static constexpr int kKernel = 3;

  struct Weights {
    std::vector<double> conv1;  // 8 x 3 x 3 x 3
    std::vector<double> bias1;  // 8
    std::vector<double> conv2;  // 16 x 8 x 3 x 3
    std::vector<double> bias2;  // 16
    std::vector<double> dense;  // 10 x 16
    std::vector<double> dense_bias;  // 10
  };

  ReferenceCnn(uint64_t seed, const ReferenceCnnOptions& options);

  std::string name() const override { return "reference-cnn"; }
  const AdapterCapabilities& capabilities() const override { return caps_; }
  const Weights& weights() const { return weights_; }
  uint64_t seed() const { return seed_; }

  // Bound K such that changing one input pixel (all channels) by at most
  // delta changes every class probability by at most K * delta.
  double LipschitzBound() const;

  // ReLU on/off pattern and max-pool selections for `image`. Two inputs with
  // equal signatures lie in the same linear region of the network.
  std::vector<int> ActivationSignature(const Tensor& image) const;

 protected:
  absl::StatusOr<std::vector<PredictionVector>> PredictBatch(
      std::span<const Tensor> images) const override;
  absl::StatusOr<FeatureMaps> ComputeFeatureMaps(
      const Tensor& image) const override;
  absl::StatusOr<Tensor> ComputeInputGradient(const Tensor& image,
                                              int target_class) const override;

 private:
  struct Trace {
    Tensor conv1_pre;              // 32x32x8
    Tensor pooled;                 // 16x16x8, post-ReLU
    std::vector<int> pool_source;  // flat conv1 index feeding each pooled cell
    Tensor conv2_pre;              // 16x16x16
    Tensor features;               // 16x16x16, post-ReLU
    std::vector<double> logits;
    std::vector<double> probs;
  };

  Trace Forward(const Tensor& image) const;

  uint64_t seed_;
  AdapterCapabilities caps_;
  Weights weights_;
};

std::unique_ptr<ReferenceCnn> BuildReferenceCnn(
    uint64_t seed, const ReferenceCnnOptions& options = {});

}  // namespace sidu::model

#endif  // SIDU_REFERENCE_CNN_H_
