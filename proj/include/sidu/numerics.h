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

// Numeric kernels shared by the explanation, metric and attack code.

#ifndef SIDU_NUMERICS_H_
#define SIDU_NUMERICS_H_

#include <span>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sidu/tensor.h"

namespace sidu {

enum class Norm { kL2, kL1 };

// Resizes a rank-2 tensor with bilinear interpolation using half-pixel centers:
// the source coordinate of output index i is (i + 0.5) * src / dst - 0.5,
// clamped to the valid source range. Resizing to the source size is the
// identity.
absl::StatusOr<Tensor> BilinearResize(const Tensor& src, int out_h, int out_w);

// Resizes every channel of an H x W x C image.
absl::StatusOr<Tensor> BilinearResizeImage(const Tensor& image, int out_h,
                                           int out_w);

// Separable Gaussian blur of a rank-2 tensor. The kernel is truncated at
// radius ceil(3 * sigma_px). Near the borders the in-bounds part of the kernel
// is renormalized to unit mass instead of zero padding.
absl::StatusOr<Tensor> GaussianBlur(const Tensor& src, double sigma_px);

// Applies GaussianBlur to each channel of an H x W x C image.
absl::StatusOr<Tensor> GaussianBlurImage(const Tensor& image, double sigma_px);

// Max-subtracted softmax of a rank-1 tensor.
absl::StatusOr<Tensor> Softmax(const Tensor& logits);
// Unchecked variant over a raw span; `out` must have the same length.
void SoftmaxInPlace(std::span<const double> logits, std::span<double> out);

absl::StatusOr<double> L2Distance(std::span<const double> a,
                                  std::span<const double> b);
absl::StatusOr<double> L1Distance(std::span<const double> a,
                                  std::span<const double> b);
absl::StatusOr<double> Distance(std::span<const double> a,
                                std::span<const double> b, Norm norm);

const char* NormName(Norm norm);
absl::StatusOr<Norm> ParseNorm(absl::string_view name);

}  // namespace sidu

#endif  // SIDU_NUMERICS_H_
