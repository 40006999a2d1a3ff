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

#include "sidu/reference_cnn.h"

#include <algorithm>
#include <cmath>

#include "sidu/numerics.h"
#include "sidu/random.h"

namespace sidu::model {
namespace {

constexpr double kInitRange = 0.1;

std::vector<double> Draw(SplitMix64& rng, int count) {
  std::vector<double> out(count);
  for (double& v : out) v = rng.Uniform(-kInitRange, kInitRange);
  return out;
}

std::vector<double> DrawBias(SplitMix64& rng, int count, double bias) {
  Draw(rng, count);
  return std::vector<double>(count, bias);
}

int KernelIndex(int o, int i, int ky, int kx, int in_ch) {
  return ((o * in_ch + i) * 3 + ky) * 3 + kx;
}

// 3x3 convolution, stride 1, zero padding 1, HWC layout.
Tensor Conv3x3(const Tensor& in, const std::vector<double>& kernel,
               const std::vector<double>& bias, int out_ch) {
  const int h = in.dim(0);
  const int w = in.dim(1);
  const int in_ch = in.dim(2);
  Tensor out({h, w, out_ch});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int o = 0; o < out_ch; ++o) {
        double acc = bias[o];
        for (int ky = 0; ky < 3; ++ky) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int kx = 0; kx < 3; ++kx) {
            const int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            for (int i = 0; i < in_ch; ++i) {
              acc += in.at(sy, sx, i) * kernel[KernelIndex(o, i, ky, kx, in_ch)];
            }
          }
        }
        out.at(y, x, o) = acc;
      }
    }
  }
  return out;
}

// Gradient of Conv3x3 with respect to its input.
Tensor Conv3x3Backward(const Tensor& grad_out, const std::vector<double>& kernel,
                       int in_ch) {
  const int h = grad_out.dim(0);
  const int w = grad_out.dim(1);
  const int out_ch = grad_out.dim(2);
  Tensor grad_in({h, w, in_ch});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int o = 0; o < out_ch; ++o) {
        const double g = grad_out.at(y, x, o);
        if (g == 0.0) continue;
        for (int ky = 0; ky < 3; ++ky) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int kx = 0; kx < 3; ++kx) {
            const int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            for (int i = 0; i < in_ch; ++i) {
              grad_in.at(sy, sx, i) +=
                  g * kernel[KernelIndex(o, i, ky, kx, in_ch)];
            }
          }
        }
      }
    }
  }
  return grad_in;
}

Tensor Relu(const Tensor& in) {
  Tensor out = in;
  for (double& v : out.data()) v = std::max(v, 0.0);
  return out;
}

}  // namespace

ReferenceCnn::ReferenceCnn(uint64_t seed, const ReferenceCnnOptions& options)
    : seed_(seed) {
  caps_.has_gradients = true;
  caps_.max_batch = std::max(options.max_batch, 1);
  caps_.height = kInputSide;
  caps_.width = kInputSide;
  caps_.channels = kInputChannels;
  caps_.num_classes = kNumClasses;

  SplitMix64 rng(seed);
  weights_.conv1 = Draw(rng, kConv1Channels * kInputChannels * kKernel * kKernel);
  weights_.bias1 = DrawBias(rng, kConv1Channels, options.bias);
  weights_.conv2 = Draw(rng, kConv2Channels * kConv1Channels * kKernel * kKernel);
  weights_.bias2 = DrawBias(rng, kConv2Channels, options.bias);
  weights_.dense = Draw(rng, kNumClasses * kConv2Channels);
  weights_.dense_bias = DrawBias(rng, kNumClasses, options.bias);
}

ReferenceCnn::Trace ReferenceCnn::Forward(const Tensor& image) const {
  Trace t;
  t.conv1_pre = Conv3x3(image, weights_.conv1, weights_.bias1, kConv1Channels);

  const int ph = kInputSide / 2;
  t.pooled = Tensor({ph, ph, kConv1Channels});
  t.pool_source.assign(t.pooled.size(), 0);
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < ph; ++x) {
      for (int c = 0; c < kConv1Channels; ++c) {
        // Ties keep the first cell of the window in row-major order.
        int best_y = 2 * y;
        int best_x = 2 * x;
        double best = std::max(t.conv1_pre.at(best_y, best_x, c), 0.0);
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const double v = std::max(t.conv1_pre.at(2 * y + dy, 2 * x + dx, c), 0.0);
            if (v > best) {
              best = v;
              best_y = 2 * y + dy;
              best_x = 2 * x + dx;
            }
          }
        }
        t.pooled.at(y, x, c) = best;
        t.pool_source[(y * ph + x) * kConv1Channels + c] =
            (best_y * kInputSide + best_x) * kConv1Channels + c;
      }
    }
  }

  t.conv2_pre = Conv3x3(t.pooled, weights_.conv2, weights_.bias2, kConv2Channels);
  t.features = Relu(t.conv2_pre);

  std::vector<double> gap(kConv2Channels, 0.0);
  for (int y = 0; y < kFeatureSide; ++y) {
    for (int x = 0; x < kFeatureSide; ++x) {
      for (int c = 0; c < kConv2Channels; ++c) gap[c] += t.features.at(y, x, c);
    }
  }
  for (double& g : gap) g /= kFeatureSide * kFeatureSide;

  t.logits.assign(kNumClasses, 0.0);
  for (int k = 0; k < kNumClasses; ++k) {
    double acc = weights_.dense_bias[k];
    for (int j = 0; j < kConv2Channels; ++j) {
      acc += weights_.dense[k * kConv2Channels + j] * gap[j];
    }
    t.logits[k] = acc;
  }
  t.probs.assign(kNumClasses, 0.0);
  SoftmaxInPlace(t.logits, t.probs);
  return t;
}

absl::StatusOr<std::vector<PredictionVector>> ReferenceCnn::PredictBatch(
    std::span<const Tensor> images) const {
  std::vector<PredictionVector> out;
  out.reserve(images.size());
  for (const Tensor& image : images) {
    Trace t = Forward(image);
    out.push_back({Tensor::Vector(std::move(t.probs)), {}});
  }
  return out;
}

absl::StatusOr<FeatureMaps> ReferenceCnn::ComputeFeatureMaps(
    const Tensor& image) const {
  Trace t = Forward(image);
  return FeatureMaps{std::move(t.features), "conv2_relu"};
}

absl::StatusOr<Tensor> ReferenceCnn::ComputeInputGradient(
    const Tensor& image, int target_class) const {
  const Trace t = Forward(image);

  // d(-ln p_t)/d logits = p - onehot(t).
  std::vector<double> dlogits = t.probs;
  dlogits[target_class] -= 1.0;

  std::vector<double> dgap(kConv2Channels, 0.0);
  for (int k = 0; k < kNumClasses; ++k) {
    for (int j = 0; j < kConv2Channels; ++j) {
      dgap[j] += dlogits[k] * weights_.dense[k * kConv2Channels + j];
    }
  }

  const double inv_area = 1.0 / (kFeatureSide * kFeatureSide);
  Tensor dconv2({kFeatureSide, kFeatureSide, kConv2Channels});
  for (int y = 0; y < kFeatureSide; ++y) {
    for (int x = 0; x < kFeatureSide; ++x) {
      for (int c = 0; c < kConv2Channels; ++c) {
        if (t.conv2_pre.at(y, x, c) > 0.0) dconv2.at(y, x, c) = dgap[c] * inv_area;
      }
    }
  }

  const Tensor dpooled = Conv3x3Backward(dconv2, weights_.conv2, kConv1Channels);

  Tensor dconv1({kInputSide, kInputSide, kConv1Channels});
  for (std::size_t i = 0; i < dpooled.size(); ++i) {
    const int src = t.pool_source[i];
    if (t.conv1_pre[src] > 0.0) dconv1[src] += dpooled[i];
  }

  return Conv3x3Backward(dconv1, weights_.conv1, kInputChannels);
}

double ReferenceCnn::LipschitzBound() const {
  double conv1_mass = 0.0;
  for (double w : weights_.conv1) conv1_mass += std::abs(w);

  double conv2_mass = 0.0;
  for (int i = 0; i < kConv1Channels; ++i) {
    double col = 0.0;
    for (int o = 0; o < kConv2Channels; ++o) {
      for (int k = 0; k < kKernel * kKernel; ++k) {
        col += std::abs(weights_.conv2[KernelIndex(o, i, k / 3, k % 3, kConv1Channels)]);
      }
    }
    conv2_mass = std::max(conv2_mass, col);
  }

  double dense_peak = 0.0;
  for (double w : weights_.dense) dense_peak = std::max(dense_peak, std::abs(w));

  // L1 growth through conv1 and conv2 (ReLU and max-pool do not expand L1),
  // averaging over the feature grid, L1 -> Linf through the dense layer and
  // softmax's per-coordinate Linf constant of 1/2.
  const double gap_scale = 1.0 / (kFeatureSide * kFeatureSide);
  return 0.5 * dense_peak * gap_scale * conv2_mass * conv1_mass;
}

std::vector<int> ReferenceCnn::ActivationSignature(const Tensor& image) const {
  const Trace t = Forward(image);
  std::vector<int> sig;
  sig.reserve(t.conv1_pre.size() + t.pool_source.size() + t.conv2_pre.size());
  for (double v : t.conv1_pre.data()) sig.push_back(v > 0.0);
  sig.insert(sig.end(), t.pool_source.begin(), t.pool_source.end());
  for (double v : t.conv2_pre.data()) sig.push_back(v > 0.0);
  return sig;
}

std::unique_ptr<ReferenceCnn> BuildReferenceCnn(
    uint64_t seed, const ReferenceCnnOptions& options) {
  return std::make_unique<ReferenceCnn>(seed, options);
}

}  // namespace sidu::model
