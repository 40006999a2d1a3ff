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

// Subcommands of the `sidu` tool. Each returns a status; ExitCode maps it to
// the process exit code (0 ok, 2 bad usage or input, 1 anything else).

#ifndef SIDU_TOOLS_COMMANDS_H_
#define SIDU_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sidu/adversarial.h"
#include "sidu/model.h"
#include "tools/config.h"

namespace sidu::cli {

inline constexpr char kCausalFooter[] =
    "# full-scale reference: sidu insertion=0.65801 deletion=0.13424 "
    "(ResNet-50, ImageNet val)";
inline constexpr char kFixationFooter[] =
    "# full-scale reference: sidu KL 4.3027 SCC 0.3314 AUC 0.7708";

int ExitCode(const absl::Status& status);

struct DatasetImage {
  std::string name;  // File stem.
  std::string path;
  Tensor image;      // Resized to the model input.
};

// Every *.png in `dir`, sorted by file name.
absl::StatusOr<std::vector<DatasetImage>> LoadDataset(
    const std::string& dir, const model::AdapterCapabilities& caps);

// <fixation_dir>/<name>.json mapped onto the model input grid.
absl::StatusOr<metrics::FixationSet> LoadFixationsFor(
    const std::string& fixation_dir, const DatasetImage& img,
    const model::AdapterCapabilities& caps);

absl::Status RunExplain(const RunConfig& cfg, const std::string& image_path,
                        std::ostream& out);
absl::Status RunEvalCausal(const RunConfig& cfg, std::ostream& out);
absl::Status RunEvalFixation(const RunConfig& cfg, std::ostream& out);
absl::Status RunAttack(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace sidu::cli

#endif  // SIDU_TOOLS_COMMANDS_H_
