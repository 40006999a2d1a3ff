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

#include "sidu/oracles.h"

#include <algorithm>
#include <cmath>

namespace sidu::oracles {
namespace {

double SourceCoord(int i, int dst, int src) {
  const double s = (i + 0.5) * src / dst - 0.5;
  return std::min(std::max(s, 0.0), static_cast<double>(src - 1));
}

double VectorDistance(std::span<const double> a, std::span<const double> b,
                      Norm norm) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += norm == Norm::kL1 ? std::abs(a[k] - b[k]) : (a[k] - b[k]) * (a[k] - b[k]);
  }
  return norm == Norm::kL1 ? acc : std::sqrt(acc);
}

}  // namespace

Tensor TentResize(const Tensor& src, int out_h, int out_w) {
  Tensor out({out_h, out_w});
  for (int y = 0; y < out_h; ++y) {
    const double sy = SourceCoord(y, out_h, src.dim(0));
    for (int x = 0; x < out_w; ++x) {
      const double sx = SourceCoord(x, out_w, src.dim(1));
      double v = 0.0;
      for (int p = 0; p < src.dim(0); ++p) {
        const double wy = std::max(0.0, 1.0 - std::abs(sy - p));
        if (wy == 0.0) continue;
        for (int q = 0; q < src.dim(1); ++q) {
          v += src.at(p, q) * wy * std::max(0.0, 1.0 - std::abs(sx - q));
        }
      }
      out.at(y, x) = v;
    }
  }
  return out;
}

Tensor GaussianBump(int h, int w, int cy, int cx, double sigma) {
  Tensor out({h, w});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
      out.at(y, x) = std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return out;
}

explain::WeightVector BruteForceWeights(
    std::span<const double> p_org, const std::vector<std::vector<double>>& preds,
    double sigma, Norm norm) {
  explain::WeightVector w;
  const std::size_t n = preds.size();
  for (std::size_t i = 0; i < n; ++i) {
    w.sd.push_back(std::exp(-VectorDistance(p_org, preds[i], norm) / (2.0 * sigma * sigma)));
    double u = 0.0;
    for (std::size_t j = 0; j < n; ++j) u += VectorDistance(preds[i], preds[j], norm);
    w.uniq.push_back(u);
    w.weights.push_back(w.sd.back() * u);
  }
  return w;
}

absl::StatusOr<Tensor> StraightLineSidu(const model::ModelAdapter& adapter,
                                        const Tensor& image,
                                        const explain::SiduConfig& cfg) {
  const int h = image.dim(0);
  const int w = image.dim(1);
  const int ch = image.dim(2);
  absl::StatusOr<model::PredictionVector> org = adapter.PredictOne(image);
  if (!org.ok()) return org.status();
  absl::StatusOr<model::FeatureMaps> fm = adapter.GetFeatureMaps(image);
  if (!fm.ok()) return fm.status();
  const int n = fm->maps.dim(0);
  const int count = fm->maps.dim(2);

  std::vector<Tensor> masks;
  std::vector<std::vector<double>> preds;
  for (int i = 0; i < count; ++i) {
    double lo = fm->maps.at(0, 0, i);
    double hi = lo;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        lo = std::min(lo, fm->maps.at(y, x, i));
        hi = std::max(hi, fm->maps.at(y, x, i));
      }
    }
    Tensor binary({n, n});
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const double v = hi > lo ? (fm->maps.at(y, x, i) - lo) / (hi - lo) : 0.0;
        binary.at(y, x) = v > cfg.tau ? 1.0 : 0.0;
      }
    }
    Tensor mask = TentResize(binary, h, w);
    Tensor masked = image;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < ch; ++c) masked.at(y, x, c) = image.at(y, x, c) * mask.at(y, x);
      }
    }
    absl::StatusOr<model::PredictionVector> p = adapter.PredictOne(masked);
    if (!p.ok()) return p.status();
    preds.emplace_back(p->values().begin(), p->values().end());
    masks.push_back(std::move(mask));
  }

  const std::vector<double> p_org(org->values().begin(), org->values().end());
  const explain::WeightVector weights =
      BruteForceWeights(p_org, preds, cfg.sigma, cfg.norm);
  Tensor out({h, w});
  for (int i = 0; i < count; ++i) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out.at(y, x) += weights.weights[i] * masks[i].at(y, x);
    }
  }
  for (double& v : out.data()) v /= count;
  return out;
}

std::vector<double> QuadraticRanks(std::span<const double> values) {
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double less = 0.0;
    double equal = 0.0;
    for (double v : values) {
      if (v < values[i]) less += 1.0;
      if (v == values[i]) equal += 1.0;
    }
    ranks[i] = less + (equal + 1.0) / 2.0;
  }
  return ranks;
}

double Pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

double PairwiseAuc(std::span<const double> scores, const std::vector<bool>& positive) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

absl::StatusOr<double> FiniteDifferenceLoss(const model::ModelAdapter& adapter,
                                            const Tensor& image, int target,
                                            std::size_t index, double step) {
  Tensor plus = image;
  Tensor minus = image;
  plus[index] += step;
  minus[index] -= step;
  absl::StatusOr<model::PredictionVector> pp = adapter.PredictOne(plus);
  if (!pp.ok()) return pp.status();
  absl::StatusOr<model::PredictionVector> pm = adapter.PredictOne(minus);
  if (!pm.ok()) return pm.status();
  return (-std::log((*pp)[target]) + std::log((*pm)[target])) / (2.0 * step);
}

}  // namespace sidu::oracles
