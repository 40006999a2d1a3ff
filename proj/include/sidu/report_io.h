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

// Text serialization of curves and robustness reports. Numbers are written
// with 17 significant digits so parsing reproduces the in-memory values
// exactly.

#ifndef SIDU_REPORT_IO_H_
#define SIDU_REPORT_IO_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "sidu/adversarial.h"
#include "sidu/metrics.h"

namespace sidu {

std::string FormatDouble(double v);
absl::StatusOr<double> ParseDouble(absl::string_view text);

// Header `fraction,probability`, one row per point, then `# auc=<value>`.
std::string CurveCsv(const metrics::CausalCurve& curve);
absl::StatusOr<metrics::CausalCurve> ParseCurveCsv(absl::string_view text,
                                                   metrics::CurveMode mode);

// Header `method,epsilon,mean_kl,mean_scc,mean_auc`, then `# reference=<ref>`.
std::string RobustnessCsv(const adversarial::RobustnessReport& report);
absl::StatusOr<adversarial::RobustnessReport> ParseRobustnessCsv(
    absl::string_view text);
std::string RobustnessJson(const adversarial::RobustnessReport& report);
absl::StatusOr<adversarial::RobustnessReport> ParseRobustnessJson(
    absl::string_view text);

absl::Status WriteTextFile(const std::string& path, absl::string_view text);
absl::StatusOr<std::string> ReadTextFile(const std::string& path);

}  // namespace sidu

#endif  // SIDU_REPORT_IO_H_
