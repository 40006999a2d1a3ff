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

// PNG ingestion and rendering for the command-line front end. Only 8-bit RGB
// files are accepted; anything else is rejected rather than converted.

#ifndef SIDU_TOOLS_IMAGE_IO_H_
#define SIDU_TOOLS_IMAGE_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sidu/tensor.h"

namespace sidu::cli {

// H x W x 3 tensor with values v / 255.
absl::StatusOr<Tensor> ReadPng(const std::string& path);

// Values are clamped to [0, 1] and rounded to the nearest level.
absl::Status WritePng(const Tensor& image, const std::string& path);

std::vector<uint8_t> QuantizeImage(const Tensor& image);

// Reads `path` and resizes it bilinearly to height x width when needed.
absl::StatusOr<Tensor> LoadInputImage(const std::string& path, int height,
                                      int width, int channels);

// Min-max normalized heatmap mapped through the blue-red palette and blended
// at 0.5 over `image`. A constant heatmap maps to palette entry 0.
absl::StatusOr<Tensor> RenderOverlay(const Tensor& image, const Tensor& heatmap);

}  // namespace sidu::cli

#endif  // SIDU_TOOLS_IMAGE_IO_H_
