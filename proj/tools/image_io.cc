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

#include "tools/image_io.h"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "sidu/numerics.h"

namespace sidu::cli {
namespace {

constexpr std::array<std::array<uint8_t, 3>, 256> kPalette = {{
#include "tools/color_table.inc"
}};

uint8_t ToLevel(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

absl::StatusOr<Tensor> ReadPng(const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": not a decodable PNG (", img.message, ")"));
  }
  if (img.format != PNG_FORMAT_RGB) {
    png_image_free(&img);
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": only 8-bit RGB PNG is supported (format flags ",
                     img.format, ")"));
  }
  std::vector<uint8_t> pixels(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, pixels.data(), 0, nullptr)) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": PNG decode failed (", img.message, ")"));
  }
  Tensor out({static_cast<int>(img.height), static_cast<int>(img.width), 3});
  for (std::size_t i = 0; i < pixels.size(); ++i) out[i] = pixels[i] / 255.0;
  return out;
}

std::vector<uint8_t> QuantizeImage(const Tensor& image) {
  std::vector<uint8_t> out(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) out[i] = ToLevel(image[i]);
  return out;
}

absl::Status WritePng(const Tensor& image, const std::string& path) {
  if (image.rank() != 3 || image.dim(2) != 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("PNG output needs H x W x 3, got ", image.DimsString()));
  }
  std::vector<uint8_t> pixels = QuantizeImage(image);
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = image.dim(1);
  img.height = image.dim(0);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, pixels.data(), 0, nullptr)) {
    return absl::InternalError(absl::StrCat(path, ": PNG write failed (", img.message, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Tensor> LoadInputImage(const std::string& path, int height,
                                      int width, int channels) {
  if (channels != 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("model expects ", channels, " channels; PNG input is RGB"));
  }
  absl::StatusOr<Tensor> img = ReadPng(path);
  if (!img.ok()) return img.status();
  if (img->dim(0) == height && img->dim(1) == width) return img;
  return BilinearResizeImage(*img, height, width);
}

absl::StatusOr<Tensor> RenderOverlay(const Tensor& image, const Tensor& heatmap) {
  if (image.rank() != 3 || image.dim(2) != 3 || heatmap.rank() != 2 ||
      heatmap.dim(0) != image.dim(0) || heatmap.dim(1) != image.dim(1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "overlay of ", heatmap.DimsString(), " onto ", image.DimsString()));
  }
  const double lo = heatmap.Min();
  const double hi = heatmap.Max();
  Tensor out = image;
  for (int y = 0; y < image.dim(0); ++y) {
    for (int x = 0; x < image.dim(1); ++x) {
      const double v = hi > lo ? (heatmap.at(y, x) - lo) / (hi - lo) : 0.0;
      const auto& rgb = kPalette[std::lround(v * 255.0)];
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = 0.5 * image.at(y, x, c) + 0.5 * (rgb[c] / 255.0);
      }
    }
  }
  return out;
}

}  // namespace sidu::cli
