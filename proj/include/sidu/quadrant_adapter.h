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

#ifndef SIDU_QUADRANT_ADAPTER_H_
#define SIDU_QUADRANT_ADAPTER_H_

#include "sidu/model.h"

namespace sidu::model {

struct QuadrantAdapterOptions {
  int side = 32;
  int channels = 3;
  // 0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right.
  int scoring_quadrant = 0;
  bool has_gradients = true;
  int max_batch = 256;
};

// Synthetic two-class model with analytically known saliency. The class-0
// probability is the mean intensity of the scoring quadrant (clamped to
// [0, 1]); class 1 gets the remainder. Its feature maps are the four
// quadrant indicators at full input resolution, so each map masks exactly
// one quadrant.
class QuadrantAdapter : public ModelAdapter {
 public:
  explicit QuadrantAdapter(const QuadrantAdapterOptions& options = {});

  std::string name() const override { return "quadrant"; }
  const AdapterCapabilities& capabilities() const override { return caps_; }
  int scoring_quadrant() const { return options_.scoring_quadrant; }

 protected:
  absl::StatusOr<std::vector<PredictionVector>> PredictBatch(
      std::span<const Tensor> images) const override;
  absl::StatusOr<FeatureMaps> ComputeFeatureMaps(
      const Tensor& image) const override;
  absl::StatusOr<Tensor> ComputeInputGradient(const Tensor& image,
                                              int target_class) const override;

 private:
  double QuadrantMean(const Tensor& image) const;

  QuadrantAdapterOptions options_;
  AdapterCapabilities caps_;
};

// Quadrant (0..3) containing pixel (y, x) of a side x side image.
int QuadrantOf(int y, int x, int side);

// side x side map equal to 1 on `quadrant` and 0 elsewhere.
Tensor QuadrantIndicator(int side, int quadrant);

}  // namespace sidu::model

#endif  // SIDU_QUADRANT_ADAPTER_H_
