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

#include "sidu/file_adapter.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "sidu/numerics.h"
#include "sidu/tensor_file.h"

namespace sidu::model {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

absl::Status ParseError(const std::string& path, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("manifest parse error in ", path, ": ", what));
}

bool IsProbabilityVector(const Tensor& t) {
  double total = 0.0;
  for (double v : t.data()) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    total += v;
  }
  return std::abs(total - 1.0) <= 1e-6;
}

std::string Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path.string() : (base / path).string();
}

}  // namespace

absl::StatusOr<std::unique_ptr<FileAdapter>> FileAdapter::Load(
    const std::string& manifest_path, const FileAdapterOptions& options) {
  std::ifstream in(manifest_path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open manifest ", manifest_path));
  }
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return ParseError(manifest_path, "invalid JSON");
  if (!doc.is_object()) return ParseError(manifest_path, "top level must be an object");
  if (doc.empty()) return ParseError(manifest_path, "manifest has no records");

  std::unique_ptr<FileAdapter> adapter(new FileAdapter());
  AdapterCapabilities& caps = adapter->caps_;
  caps.has_gradients = false;
  caps.max_batch = std::max(options.max_batch, 1);
  caps.height = options.height;
  caps.width = options.width;
  caps.channels = options.channels;

  const fs::path base = fs::path(manifest_path).parent_path();
  std::vector<int> fm_dims;
  for (const auto& [key, entry] : doc.items()) {
    uint64_t hash = 0;
    const auto parsed = std::from_chars(key.data(), key.data() + key.size(), hash, 16);
    if (key.size() != 16 || parsed.ec != std::errc() ||
        parsed.ptr != key.data() + key.size()) {
      return ParseError(manifest_path,
                        absl::StrCat("key '", key, "' is not a 16-digit hex hash"));
    }
    if (!entry.is_object() || !entry.contains("prediction") ||
        !entry.contains("feature_maps") || !entry["prediction"].is_string() ||
        !entry["feature_maps"].is_string()) {
      return ParseError(
          manifest_path,
          absl::StrCat("record ", key,
                       " needs string fields 'prediction' and 'feature_maps'"));
    }
    absl::StatusOr<Tensor> pred =
        ReadTensorFile(Resolve(base, entry["prediction"].get<std::string>()));
    if (!pred.ok()) return pred.status();
    absl::StatusOr<Tensor> maps =
        ReadTensorFile(Resolve(base, entry["feature_maps"].get<std::string>()));
    if (!maps.ok()) return maps.status();

    if (pred->rank() != 1) {
      return ParseError(manifest_path, absl::StrCat("record ", key,
                                                    ": prediction must be rank 1"));
    }
    if (caps.num_classes == 0) caps.num_classes = static_cast<int>(pred->size());
    if (static_cast<int>(pred->size()) != caps.num_classes) {
      return ParseError(manifest_path,
                        absl::StrCat("record ", key, ": prediction length ",
                                     pred->size(), " differs from ", caps.num_classes));
    }
    if (maps->rank() != 3 || maps->dim(0) != maps->dim(1)) {
      return ParseError(manifest_path, absl::StrCat("record ", key,
                                                    ": feature maps must be n x n x N"));
    }
    if (fm_dims.empty()) fm_dims = maps->dims();
    if (maps->dims() != fm_dims) {
      return ParseError(manifest_path, absl::StrCat("record ", key,
                                                    ": feature map dims differ between records"));
    }

    Tensor scores = *std::move(pred);
    if (!IsProbabilityVector(scores)) {
      absl::StatusOr<Tensor> normalized = Softmax(scores);
      if (!normalized.ok()) return normalized.status();
      scores = *std::move(normalized);
    }
    adapter->records_[hash] =
        Record{{std::move(scores), {}}, {*std::move(maps), "external"}};
  }
  return adapter;
}

absl::StatusOr<const FileAdapter::Record*> FileAdapter::Find(
    const Tensor& image) const {
  const uint64_t hash = ImageHash(image);
  auto it = records_.find(hash);
  if (it == records_.end()) {
    return absl::NotFoundError(
        absl::StrCat("no record for image hash ", ImageHashHex(image)));
  }
  return &it->second;
}

absl::StatusOr<std::vector<PredictionVector>> FileAdapter::PredictBatch(
    std::span<const Tensor> images) const {
  std::vector<PredictionVector> out;
  out.reserve(images.size());
  for (const Tensor& image : images) {
    absl::StatusOr<const Record*> rec = Find(image);
    if (!rec.ok()) return rec.status();
    out.push_back((*rec)->prediction);
  }
  return out;
}

absl::StatusOr<FeatureMaps> FileAdapter::ComputeFeatureMaps(
    const Tensor& image) const {
  absl::StatusOr<const Record*> rec = Find(image);
  if (!rec.ok()) return rec.status();
  return (*rec)->feature_maps;
}

absl::StatusOr<std::unique_ptr<FileAdapter>> BuildFileAdapter(
    const std::string& manifest_path, const FileAdapterOptions& options) {
  return FileAdapter::Load(manifest_path, options);
}

}  // namespace sidu::model
