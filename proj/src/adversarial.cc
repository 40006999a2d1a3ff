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

#include "sidu/adversarial.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "sidu/parallel.h"

namespace sidu::adversarial {
namespace {

explain::MethodConfig MethodFor(Method method, const RobustnessOptions& options) {
  return {method, options.sidu, options.rise};
}

absl::StatusOr<Tensor> Attack(const model::ModelAdapter& adapter,
                              const Tensor& image, double epsilon,
                              const RobustnessOptions& options) {
  AttackConfig cfg;
  cfg.epsilon = epsilon;
  cfg.clip_min = options.clip_min;
  cfg.clip_max = options.clip_max;
  return Fgsm(adapter, image, cfg);
}

template <typename Fn>
absl::StatusOr<std::vector<metrics::SaliencyComparison>> PerImage(int count,
                                                                  int workers,
                                                                  Fn&& fn) {
  std::vector<absl::StatusOr<metrics::SaliencyComparison>> rows(
      count, absl::UnknownError("not run"));
  ParallelFor(count, workers, [&](int i) { rows[i] = fn(i); });
  std::vector<metrics::SaliencyComparison> out;
  out.reserve(count);
  for (auto& row : rows) {
    if (!row.ok()) return row.status();
    out.push_back(*row);
  }
  return out;
}

}  // namespace

absl::Status AttackConfig::Validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat("epsilon must be >= 0, got ", epsilon));
  }
  if (!(clip_min < clip_max)) {
    return absl::InvalidArgumentError(
        absl::StrCat("clip range [", clip_min, ", ", clip_max, "] is empty"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Tensor> Fgsm(const model::ModelAdapter& adapter,
                            const Tensor& image, const AttackConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  if (!adapter.capabilities().has_gradients) {
    return absl::UnimplementedError(absl::StrCat(
        adapter.name(), ": FGSM needs input gradients, which this adapter does not provide"));
  }
  if (image.empty() || image.Min() < cfg.clip_min || image.Max() > cfg.clip_max) {
    return absl::InvalidArgumentError(absl::StrCat(
        "image values must lie in [", cfg.clip_min, ", ", cfg.clip_max, "]"));
  }
  int target = 0;
  if (cfg.target_class.has_value()) {
    target = *cfg.target_class;
  } else {
    absl::StatusOr<model::PredictionVector> p = adapter.PredictOne(image);
    if (!p.ok()) return p.status();
    target = p->Argmax();
  }
  absl::StatusOr<Tensor> grad = adapter.InputGradient(image, target);
  if (!grad.ok()) return grad.status();

  Tensor adv = image;
  for (std::size_t i = 0; i < adv.size(); ++i) {
    const double g = (*grad)[i];
    const double sign = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
    if (sign == 0.0) continue;
    double v = std::clamp(image[i] + cfg.epsilon * sign, cfg.clip_min, cfg.clip_max);
    // x + eps can round one ulp past eps.
    while (std::abs(v - image[i]) > cfg.epsilon) v = std::nextafter(v, image[i]);
    adv[i] = v;
  }
  return adv;
}

RobustnessRecord Summarize(Method method, double epsilon,
                           std::span<const metrics::SaliencyComparison> rows) {
  RobustnessRecord r;
  r.method = method;
  r.epsilon = epsilon;
  for (const auto& row : rows) {
    r.mean_kl += row.kl_div;
    r.mean_scc += row.scc;
    r.mean_auc += row.auc;
  }
  const double n = static_cast<double>(rows.size());
  r.mean_kl /= n;
  r.mean_scc /= n;
  r.mean_auc /= n;
  return r;
}

const char* ReferenceName(Reference ref) {
  return ref == Reference::kFixationMaps ? "fixation_maps" : "clean_explanations";
}

absl::StatusOr<Reference> ParseReference(absl::string_view name) {
  if (name == "fixation_maps") return Reference::kFixationMaps;
  if (name == "clean_explanations") return Reference::kCleanExplanations;
  return absl::InvalidArgumentError(absl::StrCat("unknown reference '", name, "'"));
}

const RobustnessRecord* RobustnessReport::Find(Method method,
                                               double epsilon) const {
  for (const RobustnessRecord& r : records) {
    if (r.method == method && r.epsilon == epsilon) return &r;
  }
  return nullptr;
}

absl::StatusOr<std::vector<metrics::SaliencyComparison>> ScoreAgainstFixations(
    const model::ModelAdapter& adapter, std::span<const FixationSample> samples,
    Method method, const RobustnessOptions& options) {
  if (samples.empty()) return absl::InvalidArgumentError("no samples");
  const explain::MethodConfig cfg = MethodFor(method, options);
  return PerImage(static_cast<int>(samples.size()), options.workers,
                  [&](int i) -> absl::StatusOr<metrics::SaliencyComparison> {
                    absl::StatusOr<explain::ExplanationMap> em =
                        explain::Explain(adapter, samples[i].image, cfg);
                    if (!em.ok()) return em.status();
                    return metrics::CompareToFixations(em->heatmap, samples[i].fixations,
                                                       options.fixation);
                  });
}

absl::StatusOr<RobustnessReport> RunFixationRobustness(
    const model::ModelAdapter& adapter, std::span<const FixationSample> samples,
    std::span<const Method> methods, std::span<const double> epsilons,
    const RobustnessOptions& options) {
  if (samples.empty()) return absl::InvalidArgumentError("no samples");
  RobustnessReport report;
  report.reference = Reference::kFixationMaps;
  for (double eps : epsilons) {
    std::vector<FixationSample> attacked;
    attacked.reserve(samples.size());
    for (const FixationSample& s : samples) {
      absl::StatusOr<Tensor> adv = Attack(adapter, s.image, eps, options);
      if (!adv.ok()) return adv.status();
      attacked.push_back({s.name, *std::move(adv), s.fixations});
    }
    for (Method method : methods) {
      absl::StatusOr<std::vector<metrics::SaliencyComparison>> rows =
          ScoreAgainstFixations(adapter, attacked, method, options);
      if (!rows.ok()) return rows.status();
      report.records.push_back(Summarize(method, eps, *rows));
    }
  }
  return report;
}

std::vector<bool> TopQuantileMask(const Tensor& heatmap, double q) {
  const std::vector<int> order = metrics::RankPixels(heatmap);
  const std::size_t n = order.size();
  const std::size_t k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))), 1, n);
  const double threshold = heatmap[order[k - 1]];
  std::vector<bool> mask(n, false);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (heatmap[i] >= threshold) {
      mask[i] = true;
      ++count;
    }
  }
  if (count == n && k < n) {
    std::fill(mask.begin(), mask.end(), false);
    for (std::size_t r = 0; r < k; ++r) mask[order[r]] = true;
  }
  return mask;
}

absl::StatusOr<metrics::SaliencyComparison> CompareToReferenceMap(
    const Tensor& explained, const Tensor& reference, double quantile,
    double reg) {
  metrics::SaliencyComparison out;
  absl::StatusOr<double> kl = metrics::KlDiv(reference, explained, reg);
  if (!kl.ok()) return kl.status();
  absl::StatusOr<double> scc = metrics::Scc(explained, reference);
  if (!scc.ok()) return scc.status();
  absl::StatusOr<double> auc =
      metrics::RocAuc(explained, TopQuantileMask(reference, quantile));
  if (!auc.ok()) return auc.status();
  out.kl_div = *kl;
  out.scc = *scc;
  out.auc = *auc;
  return out;
}

absl::StatusOr<RobustnessReport> RunDriftRobustness(
    const model::ModelAdapter& adapter, std::span<const Tensor> images,
    std::span<const Method> methods, double epsilon,
    const RobustnessOptions& options) {
  if (images.empty()) return absl::InvalidArgumentError("no images");
  if (!(options.drift_quantile > 0.0 && options.drift_quantile < 1.0)) {
    return absl::InvalidArgumentError("drift quantile must be in (0, 1)");
  }
  RobustnessReport report;
  report.reference = Reference::kCleanExplanations;
  for (Method method : methods) {
    const explain::MethodConfig cfg = MethodFor(method, options);
    absl::StatusOr<std::vector<metrics::SaliencyComparison>> rows = PerImage(
        static_cast<int>(images.size()), options.workers,
        [&](int i) -> absl::StatusOr<metrics::SaliencyComparison> {
          absl::StatusOr<explain::ExplanationMap> clean =
              explain::Explain(adapter, images[i], cfg);
          if (!clean.ok()) return clean.status();
          absl::StatusOr<Tensor> adv = Attack(adapter, images[i], epsilon, options);
          if (!adv.ok()) return adv.status();
          absl::StatusOr<explain::ExplanationMap> attacked =
              explain::Explain(adapter, *adv, cfg);
          if (!attacked.ok()) return attacked.status();
          return CompareToReferenceMap(attacked->heatmap, clean->heatmap,
                                       options.drift_quantile, options.fixation.reg);
        });
    if (!rows.ok()) return rows.status();
    report.records.push_back(Summarize(method, epsilon, *rows));
  }
  return report;
}

}  // namespace sidu::adversarial
