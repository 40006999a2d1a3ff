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

#include "tools/selftest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "sidu/adversarial.h"
#include "sidu/metrics.h"
#include "sidu/numerics.h"
#include "sidu/oracles.h"
#include "sidu/quadrant_adapter.h"
#include "sidu/random.h"
#include "sidu/reference_cnn.h"
#include "tools/fixtures.h"

namespace sidu::cli {
namespace {

using explain::ExplanationMap;
using model::PredictionVector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome Fail(const absl::Status& s) { return {false, std::string(s.message())}; }

Outcome Within(double got, double want, double tol) {
  const double err = std::abs(got - want);
  return {err <= tol, absl::StrFormat("got %.12g want %.12g err %.3g", got, want, err)};
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PredictionVector Pv(std::initializer_list<double> v) {
  return {Tensor::Vector(v), {}};
}

int ArgmaxPixel(const Tensor& t) {
  return static_cast<int>(std::max_element(t.values().begin(), t.values().end()) -
                          t.values().begin());
}

// --- numerics ---

Outcome BilinearOracle() {
  const Tensor src = Tensor::Matrix({{0, 1}, {1, 0}});
  absl::StatusOr<Tensor> got = BilinearResize(src, 4, 4);
  if (!got.ok()) return Fail(got.status());
  const Tensor hand = Tensor::Matrix({{0, 0.25, 0.75, 1},
                                      {0.25, 0.375, 0.625, 0.75},
                                      {0.75, 0.625, 0.375, 0.25},
                                      {1, 0.75, 0.25, 0}});
  const double e1 = MaxAbsDiff(got->data(), oracles::TentResize(src, 4, 4).data());
  const double e2 = MaxAbsDiff(got->data(), hand.data());
  return {e1 <= 1e-12 && e2 <= 1e-12, absl::StrFormat("tent err %.3g, table err %.3g", e1, e2)};
}

Outcome GaussianImpulse() {
  const int n = 41;
  const double sigma = 3.0;
  Tensor impulse({n, n});
  impulse.at(20, 20) = 1.0;
  absl::StatusOr<Tensor> got = GaussianBlur(impulse, sigma);
  if (!got.ok()) return Fail(got.status());
  Tensor want = oracles::GaussianBump(n, n, 20, 20, sigma);
  // Truncated support: radius ceil(3 sigma) per axis.
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  double mass = 0.0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (std::abs(y - 20) > r || std::abs(x - 20) > r) want.at(y, x) = 0.0;
      mass += want.at(y, x);
    }
  }
  for (double& v : want.data()) v /= mass;
  const double err = MaxAbsDiff(got->data(), want.data());
  return {err <= 1e-9, absl::StrFormat("max err %.3g", err)};
}

Outcome SoftmaxHand() {
  absl::StatusOr<Tensor> p = Softmax(Tensor::Vector({std::log(1.0), std::log(3.0)}));
  if (!p.ok()) return Fail(p.status());
  const double err = std::max(std::abs((*p)[0] - 0.25), std::abs((*p)[1] - 0.75));
  return {err <= 1e-12, absl::StrFormat("[%.12g, %.12g]", (*p)[0], (*p)[1])};
}

Outcome L2Hand() {
  const std::vector<double> a = {1, 0};
  const std::vector<double> b = {0, 1};
  absl::StatusOr<double> d = L2Distance(a, b);
  if (!d.ok()) return Fail(d.status());
  return Within(*d, std::sqrt(2.0), 1e-12);
}

// --- model ---

Outcome CnnFeatureShape(uint64_t seed) {
  auto cnn = model::BuildReferenceCnn(seed);
  absl::StatusOr<model::FeatureMaps> fm = cnn->GetFeatureMaps(RandomImage(seed));
  if (!fm.ok()) return Fail(fm.status());
  const bool ok = fm->maps.dims() == std::vector<int>{16, 16, 16};
  return {ok, fm->maps.DimsString()};
}

Outcome CnnGradientFiniteDifference(uint64_t seed) {
  double worst = 0.0;
  int used = 0;
  int skipped = 0;
  for (int i = 0; i < 5; ++i) {
    auto cnn = model::BuildReferenceCnn(seed + i);
    const Tensor img = RandomImage(seed * 7919 + 100 + i);
    absl::StatusOr<PredictionVector> p = cnn->PredictOne(img);
    if (!p.ok()) return Fail(p.status());
    absl::StatusOr<Tensor> g = cnn->InputGradient(img, p->Argmax());
    if (!g.ok()) return Fail(g.status());
    SplitMix64 rng(seed + 500 + i);
    for (int k = 0; k < 20; ++k) {
      const std::size_t idx = rng.NextBelow(img.size());
      Tensor lo = img;
      Tensor hi = img;
      lo[idx] -= 1e-4;
      hi[idx] += 1e-4;
      if (cnn->ActivationSignature(lo) != cnn->ActivationSignature(hi)) {
        ++skipped;
        continue;
      }
      absl::StatusOr<double> fd =
          oracles::FiniteDifferenceLoss(*cnn, img, p->Argmax(), idx, 1e-4);
      if (!fd.ok()) return Fail(fd.status());
      worst = std::max(worst, std::abs(*fd - (*g)[idx]));
      ++used;
    }
  }
  return {worst <= 1e-5 && used > 0,
          absl::StrFormat("max err %.3g over %d samples, %d near kinks", worst, used, skipped)};
}

// A random-weight network is nearly uniform on [0, 1] inputs. The network is
// piecewise linear, so scaling the input up sharpens the softmax until the top
// class reaches p >= 0.99; its loss gradient is then compared with that of the
// least likely class on the same input.
Outcome GradientSanity(uint64_t seed) {
  int ordered = 0;
  const int n = 10;
  double worst_ratio = 0.0;
  for (int i = 0; i < n; ++i) {
    auto cnn = model::BuildReferenceCnn(seed + i);
    const Tensor base = RandomImage(seed * 31 + 900 + i);
    Tensor img = base;
    absl::StatusOr<PredictionVector> p = cnn->PredictOne(img);
    for (double scale = 2.0; p.ok() && (*p)[p->Argmax()] < 0.99 && scale <= 1e6; scale *= 2) {
      img = base;
      for (double& v : img.data()) v *= scale;
      p = cnn->PredictOne(img);
    }
    if (!p.ok()) return Fail(p.status());
    if ((*p)[p->Argmax()] < 0.99) return {false, "could not reach a confident prediction"};
    const auto values = p->values();
    const int worst = static_cast<int>(std::min_element(values.begin(), values.end()) -
                                       values.begin());
    absl::StatusOr<Tensor> g_best = cnn->InputGradient(img, p->Argmax());
    absl::StatusOr<Tensor> g_worst = cnn->InputGradient(img, worst);
    if (!g_best.ok()) return Fail(g_best.status());
    if (!g_worst.ok()) return Fail(g_worst.status());
    double nb = 0.0;
    double nw = 0.0;
    for (std::size_t k = 0; k < img.size(); ++k) {
      nb += (*g_best)[k] * (*g_best)[k];
      nw += (*g_worst)[k] * (*g_worst)[k];
    }
    if (nb < nw) ++ordered;
    worst_ratio = std::max(worst_ratio, std::sqrt(nb / nw));
  }
  return {ordered == n,
          absl::StrFormat("|grad(confident)| < |grad(misclassified)| on %d/%d, max ratio %.3g",
                          ordered, n, worst_ratio)};
}

// --- explanation ---

Outcome MaskBump() {
  Tensor binary({8, 8});
  binary.at(3, 5) = 1.0;
  model::FeatureMaps fm{Tensor({8, 8, 1}), "synthetic"};
  fm.maps.at(3, 5, 0) = 1.0;
  absl::StatusOr<explain::MaskSet> ms = explain::BuildMaskSet(fm, 32, 32, {});
  if (!ms.ok()) return Fail(ms.status());
  const int arg = ArgmaxPixel(ms->upsampled[0]);
  const int y = arg / 32;
  const int x = arg % 32;
  return {y >= 12 && y < 16 && x >= 20 && x < 24, absl::StrFormat("argmax (%d, %d)", y, x)};
}

Outcome SimilarityDifferenceHand(const explain::SiduConfig& defaults) {
  absl::StatusOr<double> half =
      explain::SimilarityDifference(Pv({1, 0}), Pv({0, 1}), 0.5, Norm::kL2);
  if (!half.ok()) return Fail(half.status());
  absl::StatusOr<double> dflt = explain::SimilarityDifference(Pv({1, 0}), Pv({0, 1}),
                                                              defaults.sigma, defaults.norm);
  if (!dflt.ok()) return Fail(dflt.status());
  // exp(-sqrt(2) / 0.5) and exp(-sqrt(2) / 0.125).
  const double e1 = std::abs(*half - 0.059105746561956225);
  const double e2 = std::abs(*dflt - 1.2204467326041992e-05);
  return {e1 <= 1e-12 && e2 <= 1e-15,
          absl::StrFormat("sigma 0.5: %.12g, default sigma %g: %.12g", *half, defaults.sigma,
                          *dflt)};
}

Outcome UniquenessHand() {
  const std::vector<PredictionVector> preds = {Pv({1, 0}), Pv({0, 1}), Pv({1, 0})};
  absl::StatusOr<std::vector<double>> u = explain::Uniqueness(preds, Norm::kL2);
  if (!u.ok()) return Fail(u.status());
  const double r2 = std::sqrt(2.0);
  const std::vector<double> want = {r2, 2 * r2, r2};
  const double err = MaxAbsDiff(*u, want);
  return {err <= 1e-12, absl::StrFormat("[%.9g, %.9g, %.9g]", (*u)[0], (*u)[1], (*u)[2])};
}

Outcome WeightsBruteForce(uint64_t seed, const explain::SiduConfig& cfg) {
  SplitMix64 rng(seed + 42);
  auto random_pv = [&] {
    Tensor logits({5});
    for (double& v : logits.data()) v = rng.Uniform(-2.0, 2.0);
    return PredictionVector{*Softmax(logits), {}};
  };
  const PredictionVector p_org = random_pv();
  std::vector<PredictionVector> preds;
  std::vector<std::vector<double>> raw;
  for (int i = 0; i < 4; ++i) {
    preds.push_back(random_pv());
    raw.emplace_back(preds.back().values().begin(), preds.back().values().end());
  }
  absl::StatusOr<explain::WeightVector> got = explain::FeatureWeights(p_org, preds, cfg);
  if (!got.ok()) return Fail(got.status());
  const std::vector<double> org(p_org.values().begin(), p_org.values().end());
  const explain::WeightVector want =
      oracles::BruteForceWeights(org, raw, cfg.sigma, cfg.norm);
  const double err = std::max({MaxAbsDiff(got->weights, want.weights),
                               MaxAbsDiff(got->sd, want.sd), MaxAbsDiff(got->uniq, want.uniq)});
  return {err <= 1e-9, absl::StrFormat("max err %.3g", err)};
}

Outcome PlantedSidu(uint64_t seed, const explain::SiduConfig& cfg) {
  int hits = 0;
  const int n = 5;
  for (int i = 0; i < n; ++i) {
    const int q = i % 4;
    model::QuadrantAdapterOptions opts;
    opts.scoring_quadrant = q;
    model::QuadrantAdapter adapter(opts);
    absl::StatusOr<ExplanationMap> em =
        explain::ExplainSidu(adapter, PlantedImage(seed + i, 32, q), cfg);
    if (!em.ok()) return Fail(em.status());
    const int arg = ArgmaxPixel(em->heatmap);
    const auto& w = em->weights.weights;
    const int top = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin());
    if (model::QuadrantOf(arg / 32, arg % 32, 32) == q && top == q) ++hits;
  }
  return {hits == n, absl::StrFormat("argmax and top weight in scoring quadrant %d/%d", hits, n)};
}

Outcome SiduStraightLine(uint64_t seed, const explain::SiduConfig& cfg) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    auto cnn = model::BuildReferenceCnn(seed + i);
    const Tensor img = RandomImage(seed * 13 + 300 + i);
    absl::StatusOr<ExplanationMap> em = explain::ExplainSidu(*cnn, img, cfg, {2});
    if (!em.ok()) return Fail(em.status());
    absl::StatusOr<Tensor> want = oracles::StraightLineSidu(*cnn, img, cfg);
    if (!want.ok()) return Fail(want.status());
    worst = std::max(worst, MaxAbsDiff(em->heatmap.data(), want->data()));
  }
  return {worst <= 1e-9, absl::StrFormat("max per-pixel err %.3g", worst)};
}

Outcome RisePlanted(uint64_t seed) {
  model::QuadrantAdapter adapter;
  explain::RiseConfig cfg;
  cfg.seed = seed;
  absl::StatusOr<ExplanationMap> em = explain::ExplainRise(adapter, PlantedImage(seed, 32, 0), cfg);
  if (!em.ok()) return Fail(em.status());
  double mean[4] = {0, 0, 0, 0};
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) mean[model::QuadrantOf(y, x, 32)] += em->heatmap.at(y, x) / 256.0;
  }
  const bool ok = mean[0] > mean[1] && mean[0] > mean[2] && mean[0] > mean[3];
  return {ok, absl::StrFormat("quadrant means %.6g %.6g %.6g %.6g", mean[0], mean[1], mean[2],
                              mean[3])};
}

// --- metrics ---

Outcome CurveTrapezoid() {
  const std::vector<metrics::CurvePoint> a = {{0, 0}, {0.5, 1}, {1, 1}};
  const std::vector<metrics::CurvePoint> b = {{0, 0}, {1, 1}};
  absl::StatusOr<double> ra = metrics::CurveAuc(a);
  absl::StatusOr<double> rb = metrics::CurveAuc(b);
  if (!ra.ok()) return Fail(ra.status());
  if (!rb.ok()) return Fail(rb.status());
  return {*ra == 0.75 && *rb == 0.5, absl::StrFormat("%.17g, %.17g", *ra, *rb)};
}

Outcome DeletionBreakpoint(uint64_t seed) {
  model::QuadrantAdapter adapter;
  const Tensor img = PlantedImage(seed + 11, 32, 0);
  absl::StatusOr<metrics::CausalCurve> curve =
      metrics::DeletionCurve(adapter, img, model::QuadrantIndicator(32, 0));
  if (!curve.ok()) return Fail(curve.status());
  // Every pixel replaced by its channel mean.
  absl::StatusOr<std::vector<Tensor>> probes = metrics::DeletionProbes(
      img, Tensor({32, 32}, 1.0), 2, metrics::DeletionBaseline::kChannelMean);
  if (!probes.ok()) return Fail(probes.status());
  absl::StatusOr<PredictionVector> base = adapter.PredictOne(probes->back());
  if (!base.ok()) return Fail(base.status());
  const double want = (*base)[curve->target_class];
  double err = 0.0;
  for (const metrics::CurvePoint& p : curve->points) {
    if (p.fraction >= 0.25) err = std::max(err, std::abs(p.probability - want));
  }
  const bool at_quarter = curve->points[25].fraction == 0.25;
  return {err <= 1e-9 && at_quarter,
          absl::StrFormat("baseline score %.12g, max dev from 0.25 on %.3g", want, err)};
}

Outcome InsertionReachesMax(uint64_t seed) {
  model::QuadrantAdapter adapter;
  metrics::CausalOptions opts;
  opts.start = metrics::InsertionStart::kZero;
  const Tensor img = PlantedImage(seed + 12, 32, 0);
  absl::StatusOr<metrics::CausalCurve> curve =
      metrics::InsertionCurve(adapter, img, model::QuadrantIndicator(32, 0), opts);
  if (!curve.ok()) return Fail(curve.status());
  double best = 0.0;
  for (const metrics::CurvePoint& p : curve->points) best = std::max(best, p.probability);
  const double at = curve->points[25].probability;
  return {std::abs(at - best) <= 1e-9,
          absl::StrFormat("p(0.25) %.12g, max %.12g", at, best)};
}

Outcome InsertionOrdering(uint64_t seed) {
  model::QuadrantAdapter adapter;
  const Tensor img = PlantedImage(seed + 13, 32, 0);
  const Tensor oracle = model::QuadrantIndicator(32, 0);
  Tensor reversed = oracle;
  for (double& v : reversed.data()) v = 1.0 - v;
  absl::StatusOr<metrics::CausalCurve> good = metrics::InsertionCurve(adapter, img, oracle);
  absl::StatusOr<metrics::CausalCurve> bad = metrics::InsertionCurve(adapter, img, reversed);
  if (!good.ok()) return Fail(good.status());
  if (!bad.ok()) return Fail(bad.status());
  return {good->auc > bad->auc,
          absl::StrFormat("oracle %.9g vs reversed %.9g", good->auc, bad->auc)};
}

Outcome FixationTwoMaxima() {
  metrics::FixationSet fx;
  fx.image = "two";
  fx.width = 64;
  fx.height = 64;
  fx.points = {{"a", 10, 12}, {"b", 50, 47}};
  absl::StatusOr<Tensor> hm = metrics::FixationsToHeatmap(fx, 3.0);
  if (!hm.ok()) return Fail(hm.status());
  auto is_peak = [&](int y, int x) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dy || dx) && hm->at(y + dy, x + dx) >= hm->at(y, x)) return false;
      }
    }
    return true;
  };
  const bool ok = is_peak(12, 10) && is_peak(47, 50);
  return {ok, ok ? "strict local maxima at both fixations" : "missing local maximum"};
}

Outcome AucEnumeration() {
  const Tensor sal = Tensor::Matrix({{0.9, 0.1}, {0.8, 0.2}});
  metrics::FixationSet fx;
  fx.image = "2x2";
  fx.width = 2;
  fx.height = 2;
  fx.points = {{"a", 0, 0}, {"a", 0, 1}};
  absl::StatusOr<double> auc = metrics::AucFixation(sal, fx);
  if (!auc.ok()) return Fail(auc.status());
  const double pairwise = oracles::PairwiseAuc(sal.data(), {true, false, true, false});
  return {*auc == 1.0 && pairwise == 1.0,
          absl::StrFormat("sweep %.17g, pair count %.17g", *auc, pairwise)};
}

Outcome KlHand() {
  absl::StatusOr<double> kl =
      metrics::KlDiv(Tensor::Matrix({{0.75, 0.25}}), Tensor::Matrix({{0.25, 0.75}}), 1e-15);
  if (!kl.ok()) return Fail(kl.status());
  return Within(*kl, 0.5 * std::log(3.0), 1e-9);
}

Outcome SccTies() {
  const Tensor em = Tensor::Matrix({{1, 2, 2, 3}});
  const Tensor fm = Tensor::Matrix({{1, 3, 2, 4}});
  absl::StatusOr<double> scc = metrics::Scc(em, fm);
  if (!scc.ok()) return Fail(scc.status());
  const std::vector<double> re = oracles::QuadraticRanks(em.data());
  const std::vector<double> rf = oracles::QuadraticRanks(fm.data());
  return Within(*scc, oracles::Pearson(re, rf), 1e-12);
}

// --- adversarial ---

Outcome FgsmLossIncrease(uint64_t seed) {
  auto cnn = model::BuildReferenceCnn(seed);
  adversarial::AttackConfig attack;
  attack.epsilon = 0.05;
  std::vector<double> deltas;
  for (int i = 0; i < 20; ++i) {
    const Tensor img = RandomImage(seed * 101 + 2000 + i);
    absl::StatusOr<PredictionVector> p = cnn->PredictOne(img);
    if (!p.ok()) return Fail(p.status());
    absl::StatusOr<Tensor> adv = adversarial::Fgsm(*cnn, img, attack);
    if (!adv.ok()) return Fail(adv.status());
    absl::StatusOr<PredictionVector> pa = cnn->PredictOne(*adv);
    if (!pa.ok()) return Fail(pa.status());
    deltas.push_back(model::CrossEntropy(*pa, p->Argmax()) -
                     model::CrossEntropy(*p, p->Argmax()));
  }
  std::sort(deltas.begin(), deltas.end());
  const double median = 0.5 * (deltas[9] + deltas[10]);
  return {median > 0.0, absl::StrFormat("median loss increase %.9g", median)};
}

Outcome PlantedFixationAuc(uint64_t seed, const explain::SiduConfig& cfg) {
  model::QuadrantAdapter adapter;
  std::vector<adversarial::FixationSample> samples;
  for (int i = 0; i < 4; ++i) {
    samples.push_back({absl::StrCat("p", i), PlantedImage(seed + 60 + i, 32, 0),
                       QuadrantFixations(seed + 70 + i, 32, 0, 40)});
  }
  adversarial::RobustnessOptions opts;
  opts.sidu = cfg;
  const std::vector<explain::Method> methods = {explain::Method::kSidu};
  const std::vector<double> eps = {0.0};
  absl::StatusOr<adversarial::RobustnessReport> r =
      adversarial::RunFixationRobustness(adapter, samples, methods, eps, opts);
  if (!r.ok()) return Fail(r.status());
  const double auc = r->records[0].mean_auc;
  return {auc > 0.5, absl::StrFormat("mean AUC %.9g", auc)};
}

// --- fixation controls ---

Outcome FixationPositiveControl(uint64_t seed, const explain::SiduConfig& cfg) {
  auto cnn = model::BuildReferenceCnn(seed);
  absl::StatusOr<ExplanationMap> em = explain::ExplainSidu(*cnn, RandomImage(seed + 77), cfg);
  if (!em.ok()) return Fail(em.status());
  const std::vector<int> order = metrics::RankPixels(em->heatmap);
  metrics::FixationSet fx;
  fx.image = "control";
  fx.width = 32;
  fx.height = 32;
  for (int r = 0; r < 20; ++r) fx.points.push_back({"s", order[r] % 32, order[r] / 32});
  absl::StatusOr<double> auc = metrics::AucFixation(em->heatmap, fx);
  if (!auc.ok()) return Fail(auc.status());
  return {*auc > 0.9, absl::StrFormat("AUC %.9g", *auc)};
}

Outcome FixationChanceControl(uint64_t seed, const explain::SiduConfig& cfg) {
  auto cnn = model::BuildReferenceCnn(seed);
  absl::StatusOr<ExplanationMap> em = explain::ExplainSidu(*cnn, RandomImage(seed + 78), cfg);
  if (!em.ok()) return Fail(em.status());
  absl::StatusOr<double> auc =
      metrics::AucFixation(em->heatmap, UniformFixations(seed + 79, 32, 32, 500));
  if (!auc.ok()) return Fail(auc.status());
  return {std::abs(*auc - 0.5) <= 0.1, absl::StrFormat("AUC %.9g", *auc)};
}

}  // namespace

std::vector<CheckResult> RunSelftest(const SelftestOptions& options) {
  const uint64_t s = options.seed;
  const explain::SiduConfig& cfg = options.sidu;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"numerics.bilinear_oracle", BilinearOracle},
      {"numerics.gaussian_impulse", GaussianImpulse},
      {"numerics.softmax_hand", SoftmaxHand},
      {"numerics.l2_hand", L2Hand},
      {"model.cnn_feature_shape", [&] { return CnnFeatureShape(s); }},
      {"model.gradient_finite_difference", [&] { return CnnGradientFiniteDifference(s); }},
      {"model.gradient_sanity_ordering", [&] { return GradientSanity(s); }},
      {"sidu.mask_bump", MaskBump},
      {"sidu.similarity_difference", [&] { return SimilarityDifferenceHand(cfg); }},
      {"sidu.uniqueness_hand", UniquenessHand},
      {"sidu.weights_brute_force", [&] { return WeightsBruteForce(s, cfg); }},
      {"sidu.planted_quadrant", [&] { return PlantedSidu(s, cfg); }},
      {"sidu.straight_line_oracle", [&] { return SiduStraightLine(s, cfg); }},
      {"rise.planted_quadrant", [&] { return RisePlanted(s); }},
      {"metrics.curve_trapezoid", CurveTrapezoid},
      {"metrics.deletion_breakpoint", [&] { return DeletionBreakpoint(s); }},
      {"metrics.insertion_zero_start_max", [&] { return InsertionReachesMax(s); }},
      {"metrics.insertion_ordering", [&] { return InsertionOrdering(s); }},
      {"metrics.fixation_two_maxima", FixationTwoMaxima},
      {"metrics.auc_enumeration", AucEnumeration},
      {"metrics.kl_hand", KlHand},
      {"metrics.scc_ties", SccTies},
      {"adversarial.fgsm_loss_increase", [&] { return FgsmLossIncrease(s); }},
      {"adversarial.planted_fixation_auc", [&] { return PlantedFixationAuc(s, cfg); }},
      {"cli.fixation_positive_control", [&] { return FixationPositiveControl(s, cfg); }},
      {"cli.fixation_chance_control", [&] { return FixationChanceControl(s, cfg); }},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    const Outcome o = fn();
    out.push_back({name, o.pass, o.detail});
  }
  return out;
}

std::string FormatSelftest(const std::vector<CheckResult>& results) {
  std::string text;
  int passed = 0;
  for (const CheckResult& r : results) {
    absl::StrAppendFormat(&text, "%-4s  %-36s %s\n", r.pass ? "PASS" : "FAIL", r.name, r.detail);
    passed += r.pass ? 1 : 0;
  }
  absl::StrAppendFormat(&text, "%d/%d checks passed\n", passed, results.size());
  return text;
}

bool AllPassed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace sidu::cli
