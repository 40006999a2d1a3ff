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

#include "tools/commands.h"

#include <algorithm>
#include <filesystem>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "sidu/explain.h"
#include "sidu/metrics.h"
#include "sidu/report_io.h"
#include "sidu/tensor_file.h"
#include "tools/image_io.h"

namespace sidu::cli {
namespace {

namespace fs = std::filesystem;

absl::Status MakeDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<model::ModelAdapter>> Setup(const RunConfig& cfg,
                                                           bool needs_dataset) {
  if (absl::Status s = CheckPaths(cfg, needs_dataset); !s.ok()) return s;
  return BuildModel(cfg.model);
}

std::string FixationDir(const RunConfig& cfg) {
  return cfg.fixations.empty() ? cfg.dataset : cfg.fixations;
}

}  // namespace

int ExitCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kUnimplemented:
    case absl::StatusCode::kDataLoss:
      return 2;
    default:
      return 1;
  }
}

absl::StatusOr<std::vector<DatasetImage>> LoadDataset(
    const std::string& dir, const model::AdapterCapabilities& caps) {
  std::vector<fs::path> paths;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") paths.push_back(e.path());
  }
  if (paths.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("dataset ", dir, " has no .png images"));
  }
  std::sort(paths.begin(), paths.end());
  std::vector<DatasetImage> out;
  for (const fs::path& p : paths) {
    absl::StatusOr<Tensor> img =
        LoadInputImage(p.string(), caps.height, caps.width, caps.channels);
    if (!img.ok()) return img.status();
    out.push_back({p.stem().string(), p.string(), *std::move(img)});
  }
  return out;
}

absl::StatusOr<metrics::FixationSet> LoadFixationsFor(
    const std::string& fixation_dir, const DatasetImage& img,
    const model::AdapterCapabilities& caps) {
  const fs::path path = fs::path(fixation_dir) / (img.name + ".json");
  if (!fs::is_regular_file(path)) {
    return absl::NotFoundError(absl::StrCat("image ", img.path,
                                            ": missing fixation file ", path.string()));
  }
  absl::StatusOr<metrics::FixationSet> fx = metrics::LoadFixationFile(path.string());
  if (!fx.ok()) {
    return absl::Status(fx.status().code(),
                        absl::StrCat("image ", img.path, ": ", fx.status().message()));
  }
  return metrics::RescaleFixations(*fx, caps.width, caps.height);
}

absl::Status RunExplain(const RunConfig& cfg, const std::string& image_path,
                        std::ostream& out) {
  if (!fs::is_regular_file(image_path)) {
    return absl::NotFoundError(absl::StrCat("image not found: ", image_path));
  }
  absl::StatusOr<std::unique_ptr<model::ModelAdapter>> adapter = Setup(cfg, false);
  if (!adapter.ok()) return adapter.status();
  const model::AdapterCapabilities& caps = (*adapter)->capabilities();
  absl::StatusOr<Tensor> image =
      LoadInputImage(image_path, caps.height, caps.width, caps.channels);
  if (!image.ok()) return image.status();
  if (absl::Status s = MakeDir(cfg.output); !s.ok()) return s;

  const std::string stem = fs::path(image_path).stem().string();
  for (explain::Method method : cfg.methods) {
    absl::StatusOr<explain::ExplanationMap> em = explain::Explain(
        **adapter, *image, MethodConfigFor(cfg, method), {cfg.workers});
    if (!em.ok()) return em.status();
    const std::string base =
        (fs::path(cfg.output) / absl::StrCat(stem, ".", explain::MethodName(method))).string();
    if (absl::Status s = model::WriteTensorFile(em->heatmap, base + ".heatmap.stf"); !s.ok()) {
      return s;
    }
    absl::StatusOr<Tensor> overlay = RenderOverlay(*image, em->heatmap);
    if (!overlay.ok()) return overlay.status();
    if (absl::Status s = WritePng(*overlay, base + ".overlay.png"); !s.ok()) return s;
    out << stem << " " << explain::MethodName(method) << " class=" << em->predicted_class
        << " score=" << FormatDouble(em->predicted_score) << "\n";
  }
  return absl::OkStatus();
}

absl::Status RunEvalCausal(const RunConfig& cfg, std::ostream& out) {
  absl::StatusOr<std::unique_ptr<model::ModelAdapter>> adapter = Setup(cfg, true);
  if (!adapter.ok()) return adapter.status();
  absl::StatusOr<std::vector<DatasetImage>> data =
      LoadDataset(cfg.dataset, (*adapter)->capabilities());
  if (!data.ok()) return data.status();
  const metrics::CausalOptions copts = CausalOptionsFor(cfg);
  const fs::path root = fs::path(cfg.output) / "causal";

  std::string summary = "method,images,mean_insertion_auc,mean_deletion_auc\n";
  for (explain::Method method : cfg.methods) {
    const fs::path dir = root / explain::MethodName(method);
    if (absl::Status s = MakeDir(dir); !s.ok()) return s;
    double ins_sum = 0.0;
    double del_sum = 0.0;
    for (const DatasetImage& img : *data) {
      absl::StatusOr<explain::ExplanationMap> em = explain::Explain(
          **adapter, img.image, MethodConfigFor(cfg, method), {cfg.workers});
      if (!em.ok()) return em.status();
      absl::StatusOr<metrics::CausalCurve> ins =
          metrics::InsertionCurve(**adapter, img.image, em->heatmap, copts);
      if (!ins.ok()) return ins.status();
      absl::StatusOr<metrics::CausalCurve> del =
          metrics::DeletionCurve(**adapter, img.image, em->heatmap, copts);
      if (!del.ok()) return del.status();
      if (absl::Status s = WriteTextFile((dir / (img.name + ".insertion.csv")).string(),
                                         CurveCsv(*ins));
          !s.ok()) {
        return s;
      }
      if (absl::Status s = WriteTextFile((dir / (img.name + ".deletion.csv")).string(),
                                         CurveCsv(*del));
          !s.ok()) {
        return s;
      }
      ins_sum += ins->auc;
      del_sum += del->auc;
    }
    const double n = static_cast<double>(data->size());
    absl::StrAppend(&summary, explain::MethodName(method), ",", data->size(), ",",
                    FormatDouble(ins_sum / n), ",", FormatDouble(del_sum / n), "\n");
  }
  absl::StrAppend(&summary, kCausalFooter, "\n");
  if (absl::Status s = WriteTextFile((root / "summary.csv").string(), summary); !s.ok()) {
    return s;
  }
  out << summary;
  return absl::OkStatus();
}

absl::Status RunEvalFixation(const RunConfig& cfg, std::ostream& out) {
  absl::StatusOr<std::unique_ptr<model::ModelAdapter>> adapter = Setup(cfg, true);
  if (!adapter.ok()) return adapter.status();
  const model::AdapterCapabilities& caps = (*adapter)->capabilities();
  absl::StatusOr<std::vector<DatasetImage>> data = LoadDataset(cfg.dataset, caps);
  if (!data.ok()) return data.status();
  std::vector<adversarial::FixationSample> samples;
  for (DatasetImage& img : *data) {
    absl::StatusOr<metrics::FixationSet> fx = LoadFixationsFor(FixationDir(cfg), img, caps);
    if (!fx.ok()) return fx.status();
    samples.push_back({img.name, img.image, *std::move(fx)});
  }
  const adversarial::RobustnessOptions ropts = RobustnessOptionsFor(cfg);
  const fs::path root = fs::path(cfg.output) / "fixation";
  if (absl::Status s = MakeDir(root); !s.ok()) return s;

  for (explain::Method method : cfg.methods) {
    absl::StatusOr<std::vector<metrics::SaliencyComparison>> rows =
        adversarial::ScoreAgainstFixations(**adapter, samples, method, ropts);
    if (!rows.ok()) return rows.status();
    std::string csv = "image,kl_div,scc,auc\n";
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const metrics::SaliencyComparison& r = (*rows)[i];
      absl::StrAppend(&csv, samples[i].name, ",", FormatDouble(r.kl_div), ",",
                      FormatDouble(r.scc), ",", FormatDouble(r.auc), "\n");
    }
    const adversarial::RobustnessRecord mean = adversarial::Summarize(method, 0.0, *rows);
    absl::StrAppend(&csv, "mean,", FormatDouble(mean.mean_kl), ",",
                    FormatDouble(mean.mean_scc), ",", FormatDouble(mean.mean_auc), "\n",
                    kFixationFooter, "\n");
    const std::string path = (root / absl::StrCat(explain::MethodName(method), ".csv")).string();
    if (absl::Status s = WriteTextFile(path, csv); !s.ok()) return s;
    out << explain::MethodName(method) << " mean kl_div=" << FormatDouble(mean.mean_kl)
        << " scc=" << FormatDouble(mean.mean_scc) << " auc=" << FormatDouble(mean.mean_auc)
        << "\n";
  }
  return absl::OkStatus();
}

absl::Status RunAttack(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::unique_ptr<model::ModelAdapter>> adapter = Setup(cfg, true);
  if (!adapter.ok()) return adapter.status();
  const model::AdapterCapabilities& caps = (*adapter)->capabilities();
  if (!caps.has_gradients) {
    return absl::UnimplementedError(absl::StrCat(
        "attack needs input gradients; the ", (*adapter)->name(),
        " model cannot provide them (use the builtin or quadrant model)"));
  }
  absl::StatusOr<std::vector<DatasetImage>> data = LoadDataset(cfg.dataset, caps);
  if (!data.ok()) return data.status();
  const adversarial::RobustnessOptions ropts = RobustnessOptionsFor(cfg);
  const fs::path root = fs::path(cfg.output) / "attack";

  std::vector<Tensor> images;
  for (const DatasetImage& img : *data) images.push_back(img.image);
  for (double eps : cfg.attack.epsilons) {
    const fs::path dir = root / absl::StrFormat("eps_%g", eps);
    if (absl::Status s = MakeDir(dir); !s.ok()) return s;
    for (const DatasetImage& img : *data) {
      adversarial::AttackConfig acfg{eps, std::nullopt, cfg.attack.clip_min,
                                     cfg.attack.clip_max};
      absl::StatusOr<Tensor> adv = adversarial::Fgsm(**adapter, img.image, acfg);
      if (!adv.ok()) return adv.status();
      if (absl::Status s = WritePng(*adv, (dir / (img.name + ".png")).string()); !s.ok()) {
        return s;
      }
    }
  }

  // Fixation mode runs when fixation files are present; all or none.
  std::vector<adversarial::FixationSample> samples;
  const DatasetImage* missing = nullptr;
  for (const DatasetImage& img : *data) {
    absl::StatusOr<metrics::FixationSet> fx = LoadFixationsFor(FixationDir(cfg), img, caps);
    if (absl::IsNotFound(fx.status())) {
      if (missing == nullptr) missing = &img;
      continue;
    }
    if (!fx.ok()) return fx.status();
    samples.push_back({img.name, img.image, *std::move(fx)});
  }
  if (!samples.empty() && missing != nullptr) {
    return LoadFixationsFor(FixationDir(cfg), *missing, caps).status();
  }
  if (samples.empty()) {
    err << "no fixation files found; skipping the fixation robustness report\n";
  } else {
    absl::StatusOr<adversarial::RobustnessReport> report =
        adversarial::RunFixationRobustness(**adapter, samples, cfg.methods,
                                           cfg.attack.epsilons, ropts);
    if (!report.ok()) return report.status();
    if (absl::Status s = WriteTextFile((root / "fixation_robustness.csv").string(),
                                       RobustnessCsv(*report));
        !s.ok()) {
      return s;
    }
    if (absl::Status s = WriteTextFile((root / "fixation_robustness.json").string(),
                                       RobustnessJson(*report));
        !s.ok()) {
      return s;
    }
    out << RobustnessCsv(*report);
  }

  adversarial::RobustnessReport drift;
  drift.reference = adversarial::Reference::kCleanExplanations;
  for (double eps : cfg.attack.epsilons) {
    absl::StatusOr<adversarial::RobustnessReport> r =
        adversarial::RunDriftRobustness(**adapter, images, cfg.methods, eps, ropts);
    if (!r.ok()) return r.status();
    drift.records.insert(drift.records.end(), r->records.begin(), r->records.end());
  }
  if (absl::Status s =
          WriteTextFile((root / "drift_robustness.csv").string(), RobustnessCsv(drift));
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          WriteTextFile((root / "drift_robustness.json").string(), RobustnessJson(drift));
      !s.ok()) {
    return s;
  }
  out << RobustnessCsv(drift);
  return absl::OkStatus();
}

}  // namespace sidu::cli
