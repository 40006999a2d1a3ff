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

#include "sidu/report_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"

namespace sidu {
namespace {

using nlohmann::json;

constexpr absl::string_view kCurveHeader = "fraction,probability";
constexpr absl::string_view kReportHeader = "method,epsilon,mean_kl,mean_scc,mean_auc";

std::vector<absl::string_view> Lines(absl::string_view text) {
  std::vector<absl::string_view> out;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripSuffix(line, "\r");
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

absl::Status RowError(std::size_t line, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line + 1, ": ", what));
}

}  // namespace

std::string FormatDouble(double v) { return absl::StrFormat("%.17g", v); }

absl::StatusOr<double> ParseDouble(absl::string_view text) {
  double v = 0.0;
  if (!absl::SimpleAtod(text, &v)) {
    return absl::InvalidArgumentError(absl::StrCat("not a number: '", text, "'"));
  }
  return v;
}

std::string CurveCsv(const metrics::CausalCurve& curve) {
  std::string out = absl::StrCat(kCurveHeader, "\n");
  for (const metrics::CurvePoint& p : curve.points) {
    absl::StrAppend(&out, FormatDouble(p.fraction), ",", FormatDouble(p.probability), "\n");
  }
  absl::StrAppend(&out, "# auc=", FormatDouble(curve.auc), "\n");
  return out;
}

absl::StatusOr<metrics::CausalCurve> ParseCurveCsv(absl::string_view text,
                                                   metrics::CurveMode mode) {
  const std::vector<absl::string_view> lines = Lines(text);
  if (lines.empty() || lines[0] != kCurveHeader) {
    return absl::InvalidArgumentError("curve CSV must start with 'fraction,probability'");
  }
  metrics::CausalCurve curve;
  curve.mode = mode;
  bool have_auc = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    absl::string_view line = lines[i];
    if (absl::ConsumePrefix(&line, "# auc=")) {
      absl::StatusOr<double> auc = ParseDouble(line);
      if (!auc.ok()) return RowError(i, auc.status().message());
      curve.auc = *auc;
      have_auc = true;
      continue;
    }
    const std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    if (cols.size() != 2) return RowError(i, "expected 2 columns");
    absl::StatusOr<double> f = ParseDouble(cols[0]);
    absl::StatusOr<double> p = ParseDouble(cols[1]);
    if (!f.ok() || !p.ok()) return RowError(i, "bad number");
    curve.points.push_back({*f, *p});
  }
  if (!have_auc) return absl::InvalidArgumentError("curve CSV lacks '# auc=' line");
  return curve;
}

std::string RobustnessCsv(const adversarial::RobustnessReport& report) {
  std::string out = absl::StrCat(kReportHeader, "\n");
  for (const adversarial::RobustnessRecord& r : report.records) {
    absl::StrAppend(&out, explain::MethodName(r.method), ",", FormatDouble(r.epsilon),
                    ",", FormatDouble(r.mean_kl), ",", FormatDouble(r.mean_scc), ",",
                    FormatDouble(r.mean_auc), "\n");
  }
  absl::StrAppend(&out, "# reference=", adversarial::ReferenceName(report.reference),
                  "\n");
  return out;
}

absl::StatusOr<adversarial::RobustnessReport> ParseRobustnessCsv(
    absl::string_view text) {
  const std::vector<absl::string_view> lines = Lines(text);
  if (lines.empty() || lines[0] != kReportHeader) {
    return absl::InvalidArgumentError(
        absl::StrCat("report CSV must start with '", kReportHeader, "'"));
  }
  adversarial::RobustnessReport report;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    absl::string_view line = lines[i];
    if (absl::ConsumePrefix(&line, "# reference=")) {
      absl::StatusOr<adversarial::Reference> ref = adversarial::ParseReference(line);
      if (!ref.ok()) return RowError(i, ref.status().message());
      report.reference = *ref;
      continue;
    }
    if (absl::StartsWith(line, "#")) continue;
    const std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    if (cols.size() != 5) return RowError(i, "expected 5 columns");
    absl::StatusOr<explain::Method> method = explain::ParseMethod(cols[0]);
    if (!method.ok()) return RowError(i, method.status().message());
    adversarial::RobustnessRecord r;
    r.method = *method;
    double* fields[] = {&r.epsilon, &r.mean_kl, &r.mean_scc, &r.mean_auc};
    for (int c = 0; c < 4; ++c) {
      absl::StatusOr<double> v = ParseDouble(cols[c + 1]);
      if (!v.ok()) return RowError(i, v.status().message());
      *fields[c] = *v;
    }
    report.records.push_back(r);
  }
  return report;
}

std::string RobustnessJson(const adversarial::RobustnessReport& report) {
  json doc;
  doc["reference"] = adversarial::ReferenceName(report.reference);
  doc["records"] = json::array();
  for (const adversarial::RobustnessRecord& r : report.records) {
    doc["records"].push_back({{"method", explain::MethodName(r.method)},
                              {"epsilon", r.epsilon},
                              {"mean_kl", r.mean_kl},
                              {"mean_scc", r.mean_scc},
                              {"mean_auc", r.mean_auc}});
  }
  return doc.dump(2) + "\n";
}

absl::StatusOr<adversarial::RobustnessReport> ParseRobustnessJson(
    absl::string_view text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("report JSON is not an object");
  }
  adversarial::RobustnessReport report;
  try {
    absl::StatusOr<adversarial::Reference> ref =
        adversarial::ParseReference(doc.at("reference").get<std::string>());
    if (!ref.ok()) return ref.status();
    report.reference = *ref;
    for (const json& rec : doc.at("records")) {
      absl::StatusOr<explain::Method> method =
          explain::ParseMethod(rec.at("method").get<std::string>());
      if (!method.ok()) return method.status();
      report.records.push_back({*method, rec.at("epsilon").get<double>(),
                                rec.at("mean_kl").get<double>(),
                                rec.at("mean_scc").get<double>(),
                                rec.at("mean_auc").get<double>()});
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("report JSON: ", e.what()));
  }
  return report;
}

absl::Status WriteTextFile(const std::string& path, absl::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path, " for writing"));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace sidu
