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

#ifndef SIDU_FILE_ADAPTER_H_
#define SIDU_FILE_ADAPTER_H_

#include <map>
#include <memory>
#include <string>

#include "sidu/model.h"

namespace sidu::model {

struct FileAdapterOptions {
  int height = 224;
  int width = 224;
  int channels = 3;
  int max_batch = 1024;
};

// Serves predictions and feature maps computed by an external framework.
//
// The manifest is a JSON object mapping the hex ImageHash of an input image
// to {"prediction": <tensor file>, "feature_maps": <tensor file>}. Relative
// paths resolve against the manifest's directory. All records are loaded and
// validated up front; queries are lookups. Stored predictions that are not
// already a probability vector are treated as logits and softmax-normalized.
// Gradients are never available.
class FileAdapter : public ModelAdapter {
 public:
  static absl::StatusOr<std::unique_ptr<FileAdapter>> Load(
      const std::string& manifest_path, const FileAdapterOptions& options = {});

  std::string name() const override { return "file-adapter"; }
  const AdapterCapabilities& capabilities() const override { return caps_; }
  std::size_t num_records() const { return records_.size(); }

 protected:
  absl::StatusOr<std::vector<PredictionVector>> PredictBatch(
      std::span<const Tensor> images) const override;
  absl::StatusOr<FeatureMaps> ComputeFeatureMaps(
      const Tensor& image) const override;

 private:
  struct Record {
    PredictionVector prediction;
    FeatureMaps feature_maps;
  };

  FileAdapter() = default;
  absl::StatusOr<const Record*> Find(const Tensor& image) const;

  AdapterCapabilities caps_;
  std::map<uint64_t, Record> records_;
};

absl::StatusOr<std::unique_ptr<FileAdapter>> BuildFileAdapter(
    const std::string& manifest_path, const FileAdapterOptions& options = {});

}  // namespace sidu::model

#endif  // SIDU_FILE_ADAPTER_H_
