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

// Seeded synthetic inputs shared by the selftest command and the test suites.

#ifndef SIDU_TOOLS_FIXTURES_H_
#define SIDU_TOOLS_FIXTURES_H_

#include <cstdint>

#include "sidu/metrics.h"
#include "sidu/tensor.h"

namespace sidu::cli {

// side x side x channels, uniform in [0, 1).
Tensor RandomImage(uint64_t seed, int side = 32, int channels = 3);

// Scoring quadrant uniform in [0.6, 1), everything else in [0, 0.4).
Tensor PlantedImage(uint64_t seed, int side, int quadrant, int channels = 3);

// `count` fixations uniform over `quadrant` of a side x side image.
metrics::FixationSet QuadrantFixations(uint64_t seed, int side, int quadrant,
                                       int count);

// `count` fixations uniform over the whole image.
metrics::FixationSet UniformFixations(uint64_t seed, int width, int height,
                                      int count);

}  // namespace sidu::cli

#endif  // SIDU_TOOLS_FIXTURES_H_
