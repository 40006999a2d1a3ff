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

#include "sidu/explain.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "sidu/parallel.h"
#include "sidu/random.h"

namespace sidu::explain {
namespace {

using MaskFn = std::function<Tensor(int)>;

// Scores image * mask(i) for i in [0, count), in max_batch chunks spread over
// `workers` threads. Output order follows i.
absl::StatusOr<std::vector<PredictionVector>> ScoreMasked(
    const ModelAdapter& adapter, const Tensor& image, int count,
    const MaskFn& mask, int workers) {
  const int batch = adapter.capabilities().max_batch;
  const int chunks = (count + batch - 1) / batch;
  std::vector<absl::StatusOr<std::vector<PredictionVector>>> parts(
      chunks, absl::UnknownError("not run"));
  ParallelFor(chunks, workers, [&](int k) {
    const int begin = k * batch;
    const int end = std::min(count, begin + batch);
    std::vector<Tensor> masked;
    masked.reserve(end - begin);
    for (int i = begin; i < end; ++i) {
      absl::StatusOr<Tensor> m = ApplyMask(image, mask(i));
      if (!m.ok()) {
        parts[k] = m.status();
        return;
      }
      masked.push_back(*std::move(m));
    }
    parts[k] = adapter.Predict(masked);
  });
  std::vector<PredictionVector> out;
  out.reserve(count);
  for (auto& part : parts) {
    if (!part.ok()) return part.status();
    for (PredictionVector& p : *part) out.push_back(std::move(p));
  }
  return out;
}

struct RiseDraws {
  int cell_h = 0;
  int cell_w = 0;
  std::vector<Tensor> grids;
  std::vector<std::pair<int, int>> shifts;
};

RiseDraws DrawRise(const RiseConfig& cfg, int height, int width) {
  RiseDraws d;
  d.cell_h = (height + cfg.grid - 1) / cfg.grid;
  d.cell_w = (width + cfg.grid - 1) / cfg.grid;
  SplitMix64 rng(cfg.seed);
  d.grids.reserve(cfg.num_masks);
  d.shifts.reserve(cfg.num_masks);
  for (int m = 0; m < cfg.num_masks; ++m) {
    Tensor grid({cfg.grid, cfg.grid});
    for (double& v : grid.data()) v = rng.NextDouble() < cfg.keep_prob ? 1.0 : 0.0;
    const int dy = static_cast<int>(rng.NextBelow(d.cell_h));
    const int dx = static_cast<int>(rng.NextBelow(d.cell_w));
    d.grids.push_back(std::move(grid));
    d.shifts.emplace_back(dy, dx);
  }
  return d;
}

Tensor RiseMask(const RiseDraws& d, int m, int height, int width, int grid) {
  const Tensor big = *BilinearResize(d.grids[m], (grid + 1) * d.cell_h,
                                     (grid + 1) * d.cell_w);
  const auto [dy, dx] = d.shifts[m];
  Tensor out({height, width});
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(y, x) = big.at(y + dy, x + dx);
  }
  return out;
}

}  // namespace

absl::Status SiduConfig::Validate() const {
  if (!(tau > 0.0 && tau < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("tau must be in (0, 1), got ", tau));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(absl::StrCat("sigma must be positive, got ", sigma));
  }
  return absl::OkStatus();
}

absl::Status RiseConfig::Validate() const {
  if (num_masks < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("num_masks must be >= 1, got ", num_masks));
  }
  if (grid < 2) {
    return absl::InvalidArgumentError(absl::StrCat("grid must be >= 2, got ", grid));
  }
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("keep_prob must be in (0, 1], got ", keep_prob));
  }
  return absl::OkStatus();
}

const char* MethodName(Method method) {
  return method == Method::kRise ? "rise" : "sidu";
}

absl::StatusOr<Method> ParseMethod(absl::string_view name) {
  if (name == "sidu") return Method::kSidu;
  if (name == "rise") return Method::kRise;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown method '", name, "' (expected sidu or rise)"));
}

absl::StatusOr<std::vector<Tensor>> BinarizeMaps(const FeatureMaps& fm,
                                                 double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("tau must be in (0, 1), got ", tau));
  }
  if (fm.maps.rank() != 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature maps must be n x n x N, got ", fm.maps.DimsString()));
  }
  const int h = fm.maps.dim(0);
  const int w = fm.maps.dim(1);
  std::vector<Tensor> out;
  out.reserve(fm.count());
  for (int c = 0; c < fm.count(); ++c) {
    const Tensor map = fm.maps.Channel(c);
    const double lo = map.Min();
    const double range = map.Max() - lo;
    Tensor binary({h, w});
    if (range > 0.0) {
      for (std::size_t i = 0; i < map.size(); ++i) {
        binary[i] = (map[i] - lo) / range > tau ? 1.0 : 0.0;
      }
    }
    out.push_back(std::move(binary));
  }
  return out;
}

absl::StatusOr<MaskSet> BuildMaskSet(const FeatureMaps& fm, int target_h,
                                     int target_w, const SiduConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  absl::StatusOr<std::vector<Tensor>> binary = BinarizeMaps(fm, cfg.tau);
  if (!binary.ok()) return binary.status();
  MaskSet set;
  set.upsampled.reserve(binary->size());
  for (const Tensor& b : *binary) {
    absl::StatusOr<Tensor> up = BilinearResize(b, target_h, target_w);
    if (!up.ok()) return up.status();
    set.upsampled.push_back(*std::move(up));
  }
  set.binary = *std::move(binary);
  return set;
}

absl::StatusOr<Tensor> ApplyMask(const Tensor& image, const Tensor& mask) {
  if (image.rank() != 3 || mask.rank() != 2 || image.dim(0) != mask.dim(0) ||
      image.dim(1) != mask.dim(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mask ", mask.DimsString(), " does not match image ",
                     image.DimsString()));
  }
  Tensor out = image;
  const int channels = image.dim(2);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    const double m = mask[p];
    for (int c = 0; c < channels; ++c) out[p * channels + c] *= m;
  }
  return out;
}

absl::StatusOr<std::vector<Tensor>> MaskedImages(const Tensor& image,
                                                 const MaskSet& masks) {
  std::vector<Tensor> out;
  out.reserve(masks.upsampled.size());
  for (const Tensor& m : masks.upsampled) {
    absl::StatusOr<Tensor> masked = ApplyMask(image, m);
    if (!masked.ok()) return masked.status();
    out.push_back(*std::move(masked));
  }
  return out;
}

absl::StatusOr<double> SimilarityDifference(const PredictionVector& p_org,
                                            const PredictionVector& p_i,
                                            double sigma, Norm norm) {
  if (!(sigma > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat("sigma must be positive, got ", sigma));
  }
  absl::StatusOr<double> d = Distance(p_org.values(), p_i.values(), norm);
  if (!d.ok()) return d.status();
  return std::exp(-*d / (2.0 * sigma * sigma));
}

absl::StatusOr<std::vector<double>> Uniqueness(
    std::span<const PredictionVector> preds, Norm norm) {
  const std::size_t n = preds.size();
  if (n == 0) return absl::InvalidArgumentError("uniqueness needs at least one vector");
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      absl::StatusOr<double> d = Distance(preds[i].values(), preds[j].values(), norm);
      if (!d.ok()) return d.status();
      dist[i * n + j] = *d;
      dist[j * n + i] = *d;
    }
  }
  std::vector<double> out(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(dist.begin() + i * n, n, row.begin());
    std::sort(row.begin(), row.end());
    out[i] = std::accumulate(row.begin(), row.end(), 0.0);
  }
  return out;
}

absl::StatusOr<WeightVector> FeatureWeights(
    const PredictionVector& p_org, std::span<const PredictionVector> preds,
    const SiduConfig& cfg) {
  WeightVector w;
  w.sd.reserve(preds.size());
  for (const PredictionVector& p : preds) {
    absl::StatusOr<double> sd = SimilarityDifference(p_org, p, cfg.sigma, cfg.norm);
    if (!sd.ok()) return sd.status();
    w.sd.push_back(*sd);
  }
  absl::StatusOr<std::vector<double>> uniq = Uniqueness(preds, cfg.norm);
  if (!uniq.ok()) return uniq.status();
  w.uniq = *std::move(uniq);
  w.weights.resize(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) w.weights[i] = w.sd[i] * w.uniq[i];
  return w;
}

absl::StatusOr<Tensor> WeightedMaskSum(std::span<const double> weights,
                                       std::span<const Tensor> masks) {
  if (weights.empty() || weights.size() != masks.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "weighted sum needs equal, non-zero counts; got ", weights.size(),
        " weights and ", masks.size(), " masks"));
  }
  for (const Tensor& m : masks) {
    if (!m.SameDims(masks[0])) {
      return absl::InvalidArgumentError("masks differ in dims");
    }
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a] != weights[b]) return weights[a] < weights[b];
    const auto& da = masks[a].values();
    const auto& db = masks[b].values();
    return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end());
  });
  Tensor out(masks[0].dims());
  for (std::size_t i : order) {
    const double w = weights[i];
    const auto src = masks[i].data();
    auto dst = out.data();
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += w * src[p];
  }
  const double inv = 1.0 / static_cast<double>(weights.size());
  for (double& v : out.data()) v *= inv;
  return out;
}

absl::StatusOr<ExplanationMap> ExplainSidu(const ModelAdapter& adapter,
                                           const Tensor& image,
                                           const SiduConfig& cfg,
                                           const ExplainOptions& options) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  absl::StatusOr<PredictionVector> p_org = adapter.PredictOne(image);
  if (!p_org.ok()) return p_org.status();
  absl::StatusOr<FeatureMaps> fm = adapter.GetFeatureMaps(image);
  if (!fm.ok()) return fm.status();
  absl::StatusOr<MaskSet> masks =
      BuildMaskSet(*fm, image.dim(0), image.dim(1), cfg);
  if (!masks.ok()) return masks.status();

  absl::StatusOr<std::vector<PredictionVector>> preds = ScoreMasked(
      adapter, image, masks->size(),
      [&](int i) { return masks->upsampled[i]; }, options.workers);
  if (!preds.ok()) return preds.status();

  absl::StatusOr<WeightVector> weights = FeatureWeights(*p_org, *preds, cfg);
  if (!weights.ok()) return weights.status();
  absl::StatusOr<Tensor> heatmap = WeightedMaskSum(weights->weights, masks->upsampled);
  if (!heatmap.ok()) return heatmap.status();

  ExplanationMap out;
  out.heatmap = *std::move(heatmap);
  out.predicted_class = p_org->Argmax();
  out.predicted_score = (*p_org)[out.predicted_class];
  out.method = Method::kSidu;
  out.config = cfg;
  out.weights = *std::move(weights);
  return out;
}

absl::StatusOr<std::vector<Tensor>> RiseMasks(const RiseConfig& cfg, int height,
                                              int width) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  if (height < 1 || width < 1) {
    return absl::InvalidArgumentError("mask size must be positive");
  }
  const RiseDraws draws = DrawRise(cfg, height, width);
  std::vector<Tensor> out;
  out.reserve(cfg.num_masks);
  for (int m = 0; m < cfg.num_masks; ++m) {
    out.push_back(RiseMask(draws, m, height, width, cfg.grid));
  }
  return out;
}

absl::StatusOr<ExplanationMap> ExplainRise(const ModelAdapter& adapter,
                                           const Tensor& image,
                                           const RiseConfig& cfg,
                                           const ExplainOptions& options) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  absl::StatusOr<PredictionVector> p_org = adapter.PredictOne(image);
  if (!p_org.ok()) return p_org.status();
  const int c = p_org->Argmax();
  const int h = image.dim(0);
  const int w = image.dim(1);

  const RiseDraws draws = DrawRise(cfg, h, w);
  auto mask = [&](int m) { return RiseMask(draws, m, h, w, cfg.grid); };
  absl::StatusOr<std::vector<PredictionVector>> preds =
      ScoreMasked(adapter, image, cfg.num_masks, mask, options.workers);
  if (!preds.ok()) return preds.status();

  Tensor heatmap({h, w});
  for (int m = 0; m < cfg.num_masks; ++m) {
    const double score = (*preds)[m][c];
    const Tensor mk = mask(m);
    for (std::size_t p = 0; p < heatmap.size(); ++p) heatmap[p] += score * mk[p];
  }
  const double norm = 1.0 / (static_cast<double>(cfg.num_masks) * cfg.keep_prob);
  for (double& v : heatmap.data()) v *= norm;

  ExplanationMap out;
  out.heatmap = std::move(heatmap);
  out.predicted_class = c;
  out.predicted_score = (*p_org)[c];
  out.method = Method::kRise;
  out.config = cfg;
  return out;
}

absl::StatusOr<ExplanationMap> Explain(const ModelAdapter& adapter,
                                       const Tensor& image,
                                       const MethodConfig& cfg,
                                       const ExplainOptions& options) {
  if (cfg.method == Method::kRise) return ExplainRise(adapter, image, cfg.rise, options);
  return ExplainSidu(adapter, image, cfg.sidu, options);
}

}  // namespace sidu::explain
