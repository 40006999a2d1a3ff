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

#include "sidu/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "sidu/numerics.h"
#include "sidu/parallel.h"

namespace sidu::metrics {
namespace {

using nlohmann::json;
using ProbeFn = std::function<Tensor(int)>;

absl::Status CheckCurveInputs(const Tensor& image, const Tensor& heatmap,
                              int steps) {
  if (steps < 2) {
    return absl::InvalidArgumentError(absl::StrCat("steps must be >= 2, got ", steps));
  }
  if (image.rank() != 3 || heatmap.rank() != 2 || image.dim(0) != heatmap.dim(0) ||
      image.dim(1) != heatmap.dim(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("heatmap ", heatmap.DimsString(),
                     " does not match image ", image.DimsString()));
  }
  return absl::OkStatus();
}

// Copies the first `count` ranked pixels (all channels) from `src` into `dst`.
void CopyRanked(const Tensor& src, Tensor& dst, const std::vector<int>& order,
                int count) {
  const int channels = src.dim(2);
  for (int r = 0; r < count; ++r) {
    const std::size_t base = static_cast<std::size_t>(order[r]) * channels;
    for (int c = 0; c < channels; ++c) dst[base + c] = src[base + c];
  }
}

Tensor BaselineImage(const Tensor& image, DeletionBaseline baseline) {
  Tensor out(image.dims());
  if (baseline == DeletionBaseline::kZero) return out;
  const int channels = image.dim(2);
  const std::size_t pixels = image.size() / channels;
  for (int c = 0; c < channels; ++c) {
    double mean = 0.0;
    for (std::size_t p = 0; p < pixels; ++p) mean += image[p * channels + c];
    mean /= static_cast<double>(pixels);
    for (std::size_t p = 0; p < pixels; ++p) out[p * channels + c] = mean;
  }
  return out;
}

absl::StatusOr<Tensor> StartImage(const Tensor& image, InsertionStart start,
                                  double blur_sigma) {
  if (start == InsertionStart::kZero) return Tensor(image.dims());
  return GaussianBlurImage(image, blur_sigma);
}

// probes(k) for k in [0, steps] -> curve of target-class probabilities.
absl::StatusOr<CausalCurve> TraceCurve(const model::ModelAdapter& adapter,
                                       const Tensor& image, int steps,
                                       int workers, CurveMode mode,
                                       const ProbeFn& probe) {
  absl::StatusOr<model::PredictionVector> clean = adapter.PredictOne(image);
  if (!clean.ok()) return clean.status();
  const int target = clean->Argmax();

  const int count = steps + 1;
  const int batch = adapter.capabilities().max_batch;
  const int chunks = (count + batch - 1) / batch;
  std::vector<double> probs(count, 0.0);
  std::vector<absl::Status> errors(chunks);
  ParallelFor(chunks, workers, [&](int k) {
    const int begin = k * batch;
    const int end = std::min(count, begin + batch);
    std::vector<Tensor> images;
    images.reserve(end - begin);
    for (int i = begin; i < end; ++i) images.push_back(probe(i));
    absl::StatusOr<std::vector<model::PredictionVector>> preds = adapter.Predict(images);
    if (!preds.ok()) {
      errors[k] = preds.status();
      return;
    }
    for (int i = begin; i < end; ++i) probs[i] = (*preds)[i - begin][target];
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }

  CausalCurve curve;
  curve.mode = mode;
  curve.target_class = target;
  curve.points.reserve(count);
  for (int k = 0; k < count; ++k) {
    curve.points.push_back({static_cast<double>(k) / steps, probs[k]});
  }
  absl::StatusOr<double> auc = CurveAuc(curve.points);
  if (!auc.ok()) return auc.status();
  curve.auc = *auc;
  return curve;
}

absl::Status CheckSameDims(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || !a.SameDims(b)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "maps must be rank 2 with equal dims, got ", a.DimsString(), " and ",
        b.DimsString()));
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<int> RankPixels(const Tensor& heatmap) {
  std::vector<int> order(heatmap.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return heatmap[a] > heatmap[b]; });
  return order;
}

int PixelsAtStep(int k, int steps, int total) {
  return static_cast<int>(static_cast<int64_t>(k) * total / steps);
}

absl::StatusOr<std::vector<Tensor>> DeletionProbes(const Tensor& image,
                                                   const Tensor& heatmap,
                                                   int steps,
                                                   DeletionBaseline baseline) {
  if (absl::Status s = CheckCurveInputs(image, heatmap, steps); !s.ok()) return s;
  const std::vector<int> order = RankPixels(heatmap);
  const Tensor fill = BaselineImage(image, baseline);
  const int total = static_cast<int>(heatmap.size());
  std::vector<Tensor> out;
  out.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    Tensor probe = image;
    CopyRanked(fill, probe, order, PixelsAtStep(k, steps, total));
    out.push_back(std::move(probe));
  }
  return out;
}

absl::StatusOr<std::vector<Tensor>> InsertionProbes(const Tensor& image,
                                                    const Tensor& heatmap,
                                                    int steps,
                                                    InsertionStart start,
                                                    double blur_sigma) {
  if (absl::Status s = CheckCurveInputs(image, heatmap, steps); !s.ok()) return s;
  absl::StatusOr<Tensor> base = StartImage(image, start, blur_sigma);
  if (!base.ok()) return base.status();
  const std::vector<int> order = RankPixels(heatmap);
  const int total = static_cast<int>(heatmap.size());
  std::vector<Tensor> out;
  out.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    Tensor probe = *base;
    CopyRanked(image, probe, order, PixelsAtStep(k, steps, total));
    out.push_back(std::move(probe));
  }
  return out;
}

absl::StatusOr<CausalCurve> DeletionCurve(const model::ModelAdapter& adapter,
                                          const Tensor& image,
                                          const Tensor& heatmap,
                                          const CausalOptions& options) {
  if (absl::Status s = CheckCurveInputs(image, heatmap, options.steps); !s.ok()) {
    return s;
  }
  const std::vector<int> order = RankPixels(heatmap);
  const Tensor fill = BaselineImage(image, options.baseline);
  const int total = static_cast<int>(heatmap.size());
  return TraceCurve(adapter, image, options.steps, options.workers,
                    CurveMode::kDeletion, [&](int k) {
                      Tensor probe = image;
                      CopyRanked(fill, probe, order,
                                 PixelsAtStep(k, options.steps, total));
                      return probe;
                    });
}

absl::StatusOr<CausalCurve> InsertionCurve(const model::ModelAdapter& adapter,
                                           const Tensor& image,
                                           const Tensor& heatmap,
                                           const CausalOptions& options) {
  if (absl::Status s = CheckCurveInputs(image, heatmap, options.steps); !s.ok()) {
    return s;
  }
  absl::StatusOr<Tensor> base =
      StartImage(image, options.start, options.start_blur_sigma);
  if (!base.ok()) return base.status();
  const std::vector<int> order = RankPixels(heatmap);
  const int total = static_cast<int>(heatmap.size());
  return TraceCurve(adapter, image, options.steps, options.workers,
                    CurveMode::kInsertion, [&](int k) {
                      Tensor probe = *base;
                      CopyRanked(image, probe, order,
                                 PixelsAtStep(k, options.steps, total));
                      return probe;
                    });
}

absl::StatusOr<double> CurveAuc(std::span<const CurvePoint> points) {
  if (points.size() < 2) {
    return absl::InvalidArgumentError("curve needs at least two points");
  }
  if (points.front().fraction != 0.0 || points.back().fraction != 1.0) {
    return absl::InvalidArgumentError("curve fractions must span [0, 1]");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].fraction - points[i - 1].fraction;
    if (!(dx > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "curve fractions must be strictly increasing (index ", i, ")"));
    }
    area += 0.5 * dx * (points[i].probability + points[i - 1].probability);
  }
  return area;
}

absl::Status FixationSet::Validate() const {
  if (width < 1 || height < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("fixation image dims must be positive, got ", width, "x", height));
  }
  for (const Fixation& f : points) {
    if (f.x < 0 || f.x >= width || f.y < 0 || f.y >= height) {
      return absl::InvalidArgumentError(
          absl::StrCat("fixation (", f.x, ", ", f.y, ") of subject '", f.subject,
                       "' outside ", width, "x", height));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<FixationSet> ParseFixationJson(absl::string_view text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("fixation file is not a JSON object");
  }
  FixationSet fx;
  try {
    fx.image = doc.value("image", std::string());
    fx.width = doc.at("width").get<int>();
    fx.height = doc.at("height").get<int>();
    for (const json& f : doc.at("fixations")) {
      fx.points.push_back({f.value("subject", std::string()), f.at("x").get<int>(),
                           f.at("y").get<int>()});
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("fixation file: ", e.what()));
  }
  if (absl::Status s = fx.Validate(); !s.ok()) return s;
  return fx;
}

absl::StatusOr<FixationSet> LoadFixationFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open fixation file ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  absl::StatusOr<FixationSet> fx = ParseFixationJson(buf.str());
  if (!fx.ok()) {
    return absl::Status(fx.status().code(),
                        absl::StrCat(path, ": ", fx.status().message()));
  }
  return fx;
}

std::string FixationJson(const FixationSet& fx) {
  json doc;
  doc["image"] = fx.image;
  doc["width"] = fx.width;
  doc["height"] = fx.height;
  doc["fixations"] = json::array();
  for (const Fixation& f : fx.points) {
    doc["fixations"].push_back({{"subject", f.subject}, {"x", f.x}, {"y", f.y}});
  }
  return doc.dump(2);
}

absl::StatusOr<FixationSet> RescaleFixations(const FixationSet& fx, int width,
                                             int height) {
  if (absl::Status s = fx.Validate(); !s.ok()) return s;
  if (width < 1 || height < 1) {
    return absl::InvalidArgumentError("target grid must be positive");
  }
  FixationSet out = fx;
  out.width = width;
  out.height = height;
  for (Fixation& f : out.points) {
    f.x = static_cast<int>(static_cast<int64_t>(f.x) * width / fx.width);
    f.y = static_cast<int>(static_cast<int64_t>(f.y) * height / fx.height);
  }
  return out;
}

double DefaultFixationSigma(int width) { return 24.0 * width / 224.0; }

absl::StatusOr<Tensor> FixationsToHeatmap(const FixationSet& fx,
                                          double sigma_px) {
  if (absl::Status s = fx.Validate(); !s.ok()) return s;
  if (fx.points.empty()) {
    return absl::InvalidArgumentError("fixation set is empty");
  }
  Tensor impulses({fx.height, fx.width});
  for (const Fixation& f : fx.points) impulses.at(f.y, f.x) += 1.0;
  absl::StatusOr<Tensor> blurred = GaussianBlur(impulses, sigma_px);
  if (!blurred.ok()) return blurred.status();
  const double lo = blurred->Min();
  const double range = blurred->Max() - lo;
  for (double& v : blurred->data()) v = range > 0.0 ? (v - lo) / range : 1.0;
  return blurred;
}

absl::StatusOr<double> RocAuc(const Tensor& saliency,
                              const std::vector<bool>& positive) {
  if (positive.size() != saliency.size()) {
    return absl::InvalidArgumentError("label mask does not match saliency size");
  }
  const std::size_t num_pos = std::count(positive.begin(), positive.end(), true);
  const std::size_t num_neg = positive.size() - num_pos;
  if (num_pos == 0) return absl::InvalidArgumentError("no positive pixels");
  if (num_neg == 0) {
    return absl::InvalidArgumentError("every pixel is positive; no negatives");
  }
  std::vector<int> order = RankPixels(saliency);
  double auc = 0.0;
  double tpr_prev = 0.0;
  double fpr_prev = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = saliency[order[i]];
    while (i < order.size() && saliency[order[i]] == threshold) {
      positive[order[i]] ? ++tp : ++fp;
      ++i;
    }
    const double tpr = static_cast<double>(tp) / num_pos;
    const double fpr = static_cast<double>(fp) / num_neg;
    auc += 0.5 * (fpr - fpr_prev) * (tpr + tpr_prev);
    tpr_prev = tpr;
    fpr_prev = fpr;
  }
  return auc;
}

absl::StatusOr<double> AucFixation(const Tensor& saliency,
                                   const FixationSet& fx) {
  if (absl::Status s = fx.Validate(); !s.ok()) return s;
  if (saliency.rank() != 2 || saliency.dim(0) != fx.height ||
      saliency.dim(1) != fx.width) {
    return absl::InvalidArgumentError(
        absl::StrCat("saliency ", saliency.DimsString(), " does not match fixation grid ",
                     fx.height, "x", fx.width));
  }
  if (fx.points.empty()) return absl::InvalidArgumentError("fixation set is empty");
  std::vector<bool> positive(saliency.size(), false);
  for (const Fixation& f : fx.points) {
    positive[static_cast<std::size_t>(f.y) * fx.width + f.x] = true;
  }
  return RocAuc(saliency, positive);
}

absl::StatusOr<double> KlDiv(const Tensor& fm, const Tensor& em, double reg) {
  if (absl::Status s = CheckSameDims(fm, em); !s.ok()) return s;
  if (!(reg > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat("reg must be positive, got ", reg));
  }
  if (fm.Min() < 0.0 || em.Min() < 0.0) {
    return absl::InvalidArgumentError("KL divergence needs nonnegative maps");
  }
  const double fm_total = fm.Sum() + reg;
  const double em_total = em.Sum() + reg;
  double kl = 0.0;
  for (std::size_t i = 0; i < fm.size(); ++i) {
    const double p = fm[i] / fm_total;
    if (p == 0.0) continue;
    const double q = em[i] / em_total;
    kl += p * std::log((p + reg) / (q + reg));
  }
  return kl;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of 1-based ranks i+1..j+1.
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

absl::StatusOr<double> Scc(const Tensor& em, const Tensor& fm) {
  if (absl::Status s = CheckSameDims(em, fm); !s.ok()) return s;
  if (em.size() < 2) return absl::InvalidArgumentError("SCC needs at least 2 pixels");
  const std::vector<double> ra = AverageRanks(em.data());
  const std::vector<double> rb = AverageRanks(fm.data());
  const double n = static_cast<double>(ra.size());
  const double mean_a = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mean_b = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    return absl::FailedPreconditionError(
        "correlation undefined: one of the maps is constant");
  }
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

absl::StatusOr<SaliencyComparison> CompareToFixations(
    const Tensor& em, const FixationSet& fx,
    const FixationMetricOptions& options) {
  const double sigma =
      options.sigma_px > 0.0 ? options.sigma_px : DefaultFixationSigma(fx.width);
  absl::StatusOr<Tensor> fm = FixationsToHeatmap(fx, sigma);
  if (!fm.ok()) return fm.status();
  SaliencyComparison out;
  absl::StatusOr<double> auc = AucFixation(em, fx);
  if (!auc.ok()) return auc.status();
  absl::StatusOr<double> kl = KlDiv(*fm, em, options.reg);
  if (!kl.ok()) return kl.status();
  absl::StatusOr<double> scc = Scc(em, *fm);
  if (!scc.ok()) return scc.status();
  out.auc = *auc;
  out.kl_div = *kl;
  out.scc = *scc;
  return out;
}

}  // namespace sidu::metrics
