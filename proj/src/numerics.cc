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

#include "sidu/numerics.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace sidu {
namespace {

// Source sample position and interpolation weight for one output index.
struct Tap {
  int lo;
  int hi;
  double frac;
};

std::vector<Tap> HalfPixelTaps(int src, int dst) {
  std::vector<Tap> taps(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, src - 1);
    taps[i] = {lo, hi, s - lo};
  }
  return taps;
}

std::vector<double> GaussianKernel(double sigma, int radius) {
  std::vector<double> k(2 * radius + 1);
  for (int d = -radius; d <= radius; ++d) {
    k[d + radius] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  return k;
}

// One pass of the separable blur along an axis with `len` samples spaced
// `stride` apart, repeated `count` times with `outer_stride` between runs.
void BlurAxis(std::span<const double> in, std::span<double> out, int len,
              int stride, int count, int outer_stride,
              const std::vector<double>& kernel, int radius) {
  for (int r = 0; r < count; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * outer_stride;
    for (int i = 0; i < len; ++i) {
      const int lo = std::max(0, i - radius);
      const int hi = std::min(len - 1, i + radius);
      double acc = 0.0;
      double mass = 0.0;
      for (int j = lo; j <= hi; ++j) {
        const double w = kernel[j - i + radius];
        acc += w * in[base + static_cast<std::size_t>(j) * stride];
        mass += w;
      }
      out[base + static_cast<std::size_t>(i) * stride] = acc / mass;
    }
  }
}

}  // namespace

absl::StatusOr<Tensor> BilinearResize(const Tensor& src, int out_h,
                                      int out_w) {
  if (src.rank() != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("bilinear resize expects a rank-2 tensor, got rank ",
                     src.rank()));
  }
  if (out_h < 1 || out_w < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bilinear resize target must be at least 1x1, got ", out_h, "x", out_w));
  }
  const int in_h = src.dim(0);
  const int in_w = src.dim(1);
  const std::vector<Tap> ys = HalfPixelTaps(in_h, out_h);
  const std::vector<Tap> xs = HalfPixelTaps(in_w, out_w);
  Tensor out({out_h, out_w});
  for (int y = 0; y < out_h; ++y) {
    const Tap& ty = ys[y];
    for (int x = 0; x < out_w; ++x) {
      const Tap& tx = xs[x];
      // Diagonal pairs first: the expression is symmetric under transposition.
      const double w00 = (1.0 - ty.frac) * (1.0 - tx.frac);
      const double w11 = ty.frac * tx.frac;
      const double w01 = (1.0 - ty.frac) * tx.frac;
      const double w10 = ty.frac * (1.0 - tx.frac);
      out.at(y, x) = (src.at(ty.lo, tx.lo) * w00 + src.at(ty.hi, tx.hi) * w11) +
                     (src.at(ty.lo, tx.hi) * w01 + src.at(ty.hi, tx.lo) * w10);
    }
  }
  return out;
}

absl::StatusOr<Tensor> BilinearResizeImage(const Tensor& image, int out_h,
                                           int out_w) {
  if (image.rank() != 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "image resize expects an HxWxC tensor, got ", image.DimsString()));
  }
  const int channels = image.dim(2);
  Tensor out({std::max(out_h, 1), std::max(out_w, 1), channels});
  for (int c = 0; c < channels; ++c) {
    absl::StatusOr<Tensor> plane = BilinearResize(image.Channel(c), out_h, out_w);
    if (!plane.ok()) return plane.status();
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) out.at(y, x, c) = plane->at(y, x);
    }
  }
  return out;
}

absl::StatusOr<Tensor> GaussianBlur(const Tensor& src, double sigma_px) {
  if (!(sigma_px > 0.0) || !std::isfinite(sigma_px)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gaussian sigma must be positive, got ", sigma_px));
  }
  if (src.rank() != 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "gaussian blur expects a rank-2 tensor, got ", src.DimsString()));
  }
  const int h = src.dim(0);
  const int w = src.dim(1);
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_px));
  const std::vector<double> kernel = GaussianKernel(sigma_px, radius);

  // Per-axis renormalization equals 2-D renormalization because both the
  // kernel and the in-bounds region factor over the axes.
  Tensor tmp({h, w});
  Tensor out({h, w});
  BlurAxis(src.data(), tmp.data(), w, 1, h, w, kernel, radius);
  BlurAxis(tmp.data(), out.data(), h, w, w, 1, kernel, radius);
  return out;
}

absl::StatusOr<Tensor> GaussianBlurImage(const Tensor& image,
                                         double sigma_px) {
  if (image.rank() != 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "image blur expects an HxWxC tensor, got ", image.DimsString()));
  }
  Tensor out(image.dims());
  for (int c = 0; c < image.dim(2); ++c) {
    absl::StatusOr<Tensor> plane = GaussianBlur(image.Channel(c), sigma_px);
    if (!plane.ok()) return plane.status();
    for (int y = 0; y < image.dim(0); ++y) {
      for (int x = 0; x < image.dim(1); ++x) out.at(y, x, c) = plane->at(y, x);
    }
  }
  return out;
}

void SoftmaxInPlace(std::span<const double> logits, std::span<double> out) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

absl::StatusOr<Tensor> Softmax(const Tensor& logits) {
  if (logits.empty() || logits.rank() != 1) {
    return absl::InvalidArgumentError("softmax expects a non-empty vector");
  }
  if (!logits.AllFinite()) {
    return absl::InvalidArgumentError("softmax input contains non-finite values");
  }
  Tensor out(logits.dims());
  SoftmaxInPlace(logits.data(), out.data());
  return out;
}

absl::StatusOr<double> L2Distance(std::span<const double> a,
                                  std::span<const double> b) {
  return Distance(a, b, Norm::kL2);
}

absl::StatusOr<double> L1Distance(std::span<const double> a,
                                  std::span<const double> b) {
  return Distance(a, b, Norm::kL1);
}

absl::StatusOr<double> Distance(std::span<const double> a,
                                std::span<const double> b, Norm norm) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "distance between vectors of length ", a.size(), " and ", b.size()));
  }
  double acc = 0.0;
  if (norm == Norm::kL1) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

const char* NormName(Norm norm) { return norm == Norm::kL1 ? "l1" : "l2"; }

absl::StatusOr<Norm> ParseNorm(absl::string_view name) {
  if (name == "l2" || name == "L2") return Norm::kL2;
  if (name == "l1" || name == "L1") return Norm::kL1;
  return absl::InvalidArgumentError(absl::StrCat("unknown norm '", name, "'"));
}

}  // namespace sidu
