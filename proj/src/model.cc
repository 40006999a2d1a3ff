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

#include "sidu/model.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "sidu/parallel.h"

namespace sidu::model {
namespace {

constexpr double kProbabilityTolerance = 1e-6;

absl::Status Annotate(const absl::Status& status, const std::string& who) {
  return absl::Status(status.code(), absl::StrCat(who, ": ", status.message()));
}

absl::Status CheckProbabilities(const PredictionVector& p, int num_classes) {
  if (p.num_classes() != num_classes) {
    return absl::InternalError(absl::StrCat("adapter returned ",
                                            p.num_classes(), " scores, expected ",
                                            num_classes));
  }
  double total = 0.0;
  for (double v : p.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      return absl::InternalError(
          absl::StrCat("adapter returned score ", v, " outside [0, 1]"));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    return absl::InternalError(
        absl::StrCat("adapter scores sum to ", total, ", expected 1"));
  }
  return absl::OkStatus();
}

}  // namespace

int PredictionVector::Argmax() const {
  const auto v = values();
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

absl::Status ModelAdapter::CheckImage(const Tensor& image) const {
  if (image.dims() != capabilities().input_dims()) {
    return absl::InvalidArgumentError(
        absl::StrCat(name(), ": image dims ", image.DimsString(),
                     " do not match adapter input ", capabilities().height, "x",
                     capabilities().width, "x", capabilities().channels));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<PredictionVector>> ModelAdapter::Predict(
    std::span<const Tensor> images) const {
  const AdapterCapabilities& caps = capabilities();
  if (static_cast<int>(images.size()) > caps.max_batch) {
    return absl::InvalidArgumentError(
        absl::StrCat(name(), ": batch of ", images.size(),
                     " exceeds max_batch ", caps.max_batch));
  }
  for (const Tensor& image : images) {
    if (absl::Status s = CheckImage(image); !s.ok()) return s;
  }
  absl::StatusOr<std::vector<PredictionVector>> out = PredictBatch(images);
  if (!out.ok()) return Annotate(out.status(), name());
  if (out->size() != images.size()) {
    return absl::InternalError(absl::StrCat(name(), ": returned ", out->size(),
                                            " predictions for ", images.size(),
                                            " images"));
  }
  for (const PredictionVector& p : *out) {
    if (absl::Status s = CheckProbabilities(p, caps.num_classes); !s.ok()) {
      return Annotate(s, name());
    }
  }
  return out;
}

absl::StatusOr<PredictionVector> ModelAdapter::PredictOne(
    const Tensor& image) const {
  absl::StatusOr<std::vector<PredictionVector>> out =
      Predict(std::span<const Tensor>(&image, 1));
  if (!out.ok()) return out.status();
  return std::move(out->front());
}

absl::StatusOr<FeatureMaps> ModelAdapter::GetFeatureMaps(
    const Tensor& image) const {
  if (absl::Status s = CheckImage(image); !s.ok()) return s;
  absl::StatusOr<FeatureMaps> fm = ComputeFeatureMaps(image);
  if (!fm.ok()) return Annotate(fm.status(), name());
  if (fm->maps.rank() != 3 || fm->maps.dim(0) != fm->maps.dim(1)) {
    return absl::InternalError(absl::StrCat(
        name(), ": feature maps must be n x n x N, got ", fm->maps.DimsString()));
  }
  if (!fm->maps.AllFinite()) {
    return absl::InternalError(
        absl::StrCat(name(), ": feature maps contain non-finite values"));
  }
  return fm;
}

absl::StatusOr<Tensor> ModelAdapter::InputGradient(const Tensor& image,
                                                   int target_class) const {
  if (!capabilities().has_gradients) {
    return absl::UnimplementedError(
        absl::StrCat(name(), ": adapter does not provide input gradients"));
  }
  if (target_class < 0 || target_class >= capabilities().num_classes) {
    return absl::InvalidArgumentError(
        absl::StrCat(name(), ": target class ", target_class,
                     " outside [0, ", capabilities().num_classes, ")"));
  }
  if (absl::Status s = CheckImage(image); !s.ok()) return s;
  absl::StatusOr<Tensor> grad = ComputeInputGradient(image, target_class);
  if (!grad.ok()) return Annotate(grad.status(), name());
  return grad;
}

absl::StatusOr<Tensor> ModelAdapter::ComputeInputGradient(const Tensor&,
                                                          int) const {
  return absl::UnimplementedError("input gradients not supported");
}

absl::StatusOr<std::vector<PredictionVector>> PredictAll(
    const ModelAdapter& adapter, std::span<const Tensor> images, int workers) {
  const int batch = adapter.capabilities().max_batch;
  const int total = static_cast<int>(images.size());
  const int chunks = (total + batch - 1) / batch;
  std::vector<absl::StatusOr<std::vector<PredictionVector>>> parts(
      chunks, absl::UnknownError("not run"));
  ParallelFor(chunks, workers, [&](int k) {
    const int begin = k * batch;
    const int len = std::min(batch, total - begin);
    parts[k] = adapter.Predict(images.subspan(begin, len));
  });
  std::vector<PredictionVector> out;
  out.reserve(total);
  for (auto& part : parts) {
    if (!part.ok()) return part.status();
    for (PredictionVector& p : *part) out.push_back(std::move(p));
  }
  return out;
}

double CrossEntropy(const PredictionVector& p, int target_class) {
  return -std::log(std::max(p[target_class], 1e-300));
}

}  // namespace sidu::model
