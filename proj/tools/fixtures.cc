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

#include "tools/fixtures.h"

#include "absl/strings/str_cat.h"
#include "sidu/quadrant_adapter.h"
#include "sidu/random.h"

namespace sidu::cli {

Tensor RandomImage(uint64_t seed, int side, int channels) {
  SplitMix64 rng(seed);
  Tensor img({side, side, channels});
  for (double& v : img.data()) v = rng.NextDouble();
  return img;
}

Tensor PlantedImage(uint64_t seed, int side, int quadrant, int channels) {
  SplitMix64 rng(seed);
  Tensor img({side, side, channels});
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const bool hot = model::QuadrantOf(y, x, side) == quadrant;
      for (int c = 0; c < channels; ++c) {
        img.at(y, x, c) = hot ? rng.Uniform(0.6, 1.0) : rng.Uniform(0.0, 0.4);
      }
    }
  }
  return img;
}

metrics::FixationSet QuadrantFixations(uint64_t seed, int side, int quadrant,
                                       int count) {
  SplitMix64 rng(seed);
  const int half = side / 2;
  const int y0 = quadrant >= 2 ? half : 0;
  const int x0 = quadrant % 2 == 1 ? half : 0;
  const int h = quadrant >= 2 ? side - half : half;
  const int w = quadrant % 2 == 1 ? side - half : half;
  metrics::FixationSet fx;
  fx.image = "planted";
  fx.width = side;
  fx.height = side;
  for (int i = 0; i < count; ++i) {
    fx.points.push_back({absl::StrCat("s", i % 4), x0 + static_cast<int>(rng.NextBelow(w)),
                         y0 + static_cast<int>(rng.NextBelow(h))});
  }
  return fx;
}

metrics::FixationSet UniformFixations(uint64_t seed, int width, int height,
                                      int count) {
  SplitMix64 rng(seed);
  metrics::FixationSet fx;
  fx.image = "uniform";
  fx.width = width;
  fx.height = height;
  for (int i = 0; i < count; ++i) {
    const int x = static_cast<int>(rng.NextBelow(width));
    const int y = static_cast<int>(rng.NextBelow(height));
    fx.points.push_back({absl::StrCat("s", i % 10), x, y});
  }
  return fx;
}

}  // namespace sidu::cli
