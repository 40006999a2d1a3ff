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

#include "sidu/quadrant_adapter.h"

#include <algorithm>

namespace sidu::model {
namespace {
constexpr double kClampFloor = 1e-12;
}  // namespace

int QuadrantOf(int y, int x, int side) {
  const int half = side / 2;
  return (y >= half ? 2 : 0) + (x >= half ? 1 : 0);
}

Tensor QuadrantIndicator(int side, int quadrant) {
  Tensor out({side, side});
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      out.at(y, x) = QuadrantOf(y, x, side) == quadrant ? 1.0 : 0.0;
    }
  }
  return out;
}

QuadrantAdapter::QuadrantAdapter(const QuadrantAdapterOptions& options)
    : options_(options) {
  SIDU_CHECK(options.side >= 2 && options.channels >= 1);
  SIDU_CHECK(options.scoring_quadrant >= 0 && options.scoring_quadrant < 4);
  caps_.has_gradients = options.has_gradients;
  caps_.max_batch = std::max(options.max_batch, 1);
  caps_.height = options.side;
  caps_.width = options.side;
  caps_.channels = options.channels;
  caps_.num_classes = 2;
}

double QuadrantAdapter::QuadrantMean(const Tensor& image) const {
  const int side = options_.side;
  double acc = 0.0;
  int count = 0;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (QuadrantOf(y, x, side) != options_.scoring_quadrant) continue;
      for (int c = 0; c < options_.channels; ++c) acc += image.at(y, x, c);
      count += options_.channels;
    }
  }
  return acc / count;
}

absl::StatusOr<std::vector<PredictionVector>> QuadrantAdapter::PredictBatch(
    std::span<const Tensor> images) const {
  std::vector<PredictionVector> out;
  out.reserve(images.size());
  for (const Tensor& image : images) {
    const double p0 = std::clamp(QuadrantMean(image), 0.0, 1.0);
    out.push_back({Tensor::Vector({p0, 1.0 - p0}), {"planted", "rest"}});
  }
  return out;
}

absl::StatusOr<FeatureMaps> QuadrantAdapter::ComputeFeatureMaps(
    const Tensor&) const {
  const int side = options_.side;
  Tensor maps({side, side, 4});
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) maps.at(y, x, QuadrantOf(y, x, side)) = 1.0;
  }
  return FeatureMaps{std::move(maps), "quadrants"};
}

absl::StatusOr<Tensor> QuadrantAdapter::ComputeInputGradient(
    const Tensor& image, int target_class) const {
  const int side = options_.side;
  const double mean = QuadrantMean(image);
  Tensor grad(image.dims());
  // Outside [0, 1] the clamp is flat and the gradient vanishes.
  if (mean <= 0.0 || mean >= 1.0) return grad;
  const double p0 = std::max(mean, kClampFloor);
  const double p1 = std::max(1.0 - mean, kClampFloor);
  const int half = side / 2;
  const int q = options_.scoring_quadrant;
  const int rows = q < 2 ? half : side - half;
  const int cols = q % 2 == 0 ? half : side - half;
  const double per_value = 1.0 / (rows * cols * options_.channels);
  const double dloss_dp0 = target_class == 0 ? -1.0 / p0 : 1.0 / p1;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (QuadrantOf(y, x, side) != options_.scoring_quadrant) continue;
      for (int c = 0; c < options_.channels; ++c) {
        grad.at(y, x, c) = dloss_dp0 * per_value;
      }
    }
  }
  return grad;
}

}  // namespace sidu::model
