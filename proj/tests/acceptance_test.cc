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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "sidu/adversarial.h"
#include "sidu/explain.h"
#include "sidu/metrics.h"
#include "sidu/numerics.h"
#include "sidu/oracles.h"
#include "sidu/quadrant_adapter.h"
#include "sidu/random.h"
#include "sidu/reference_cnn.h"
#include "tools/cli.h"
#include "tools/fixtures.h"
#include "tools/image_io.h"

namespace sidu {
namespace {

namespace fs = std::filesystem;
using cli::PlantedImage;
using cli::RandomImage;
using explain::ExplanationMap;
using model::PredictionVector;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void Expect(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(absl::StrCat(ok ? "" : "[x] ", note));
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

int ArgmaxPixel(const Tensor& t) {
  return static_cast<int>(std::max_element(t.values().begin(), t.values().end()) -
                          t.values().begin());
}

Verdict Ac1StraightLineOracle() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    auto cnn = model::BuildReferenceCnn(i);
    const Tensor img = RandomImage(1000 + i);
    absl::StatusOr<ExplanationMap> em = explain::ExplainSidu(*cnn, img, {}, {4});
    absl::StatusOr<Tensor> want = oracles::StraightLineSidu(*cnn, img, {});
    if (!em.ok() || !want.ok()) {
      ok = false;
      continue;
    }
    worst = std::max(worst, MaxAbsDiff(em->heatmap.data(), want->data()));
  }
  const double secs = Seconds(start);
  v.Expect(ok && worst <= 1e-9, absl::StrFormat("max per-pixel diff %.3g (<= 1e-9)", worst));
  v.Expect(secs < 10.0, absl::StrFormat("runtime %.2fs (< 10s)", secs));
  return v;
}

Verdict Ac2PlantedFeature() {
  Verdict v;
  int argmax_hits = 0;
  int weight_hits = 0;
  for (int i = 0; i < 20; ++i) {
    const int q = i % 4;
    model::QuadrantAdapterOptions opts;
    opts.scoring_quadrant = q;
    model::QuadrantAdapter adapter(opts);
    absl::StatusOr<ExplanationMap> em =
        explain::ExplainSidu(adapter, PlantedImage(2000 + i, 32, q), {});
    if (!em.ok()) continue;
    const int arg = ArgmaxPixel(em->heatmap);
    if (model::QuadrantOf(arg / 32, arg % 32, 32) == q) ++argmax_hits;
    const auto& w = em->weights.weights;
    const auto top = std::max_element(w.begin(), w.end()) - w.begin();
    if (top == q) ++weight_hits;
  }
  v.Expect(argmax_hits == 20, absl::StrFormat("heatmap argmax in scoring quadrant %d/20",
                                              argmax_hits));
  v.Expect(weight_hits == 20, absl::StrFormat("scoring-quadrant mask has max W %d/20",
                                              weight_hits));
  return v;
}

Verdict Ac3CausalSanity() {
  Verdict v;
  model::QuadrantAdapter adapter;
  const Tensor oracle = model::QuadrantIndicator(32, 0);
  Tensor reversed = oracle;
  for (double& x : reversed.data()) x = 1.0 - x;
  double min_gap = 1e9;
  int del_ordered = 0;
  double break_err = 0.0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    const Tensor img = PlantedImage(3000 + i, 32, 0);
    auto ins_good = metrics::InsertionCurve(adapter, img, oracle);
    auto ins_bad = metrics::InsertionCurve(adapter, img, reversed);
    auto del_good = metrics::DeletionCurve(adapter, img, oracle);
    auto del_bad = metrics::DeletionCurve(adapter, img, reversed);
    if (!ins_good.ok() || !ins_bad.ok() || !del_good.ok() || !del_bad.ok()) {
      v.Expect(false, "curve evaluation failed");
      return v;
    }
    min_gap = std::min(min_gap, ins_good->auc - ins_bad->auc);
    if (del_good->auc <= del_bad->auc) ++del_ordered;

    // Deletion: at 0.25 the quadrant holds channel means, which is the score
    // of the fully replaced image.
    auto full = metrics::DeletionProbes(img, Tensor({32, 32}, 1.0), 2,
                                        metrics::DeletionBaseline::kChannelMean);
    auto p_base = adapter.PredictOne(full->back());
    const auto& q = del_good->points[25];
    break_err = std::max(break_err, std::abs(q.fraction - 0.25));
    break_err = std::max(break_err, std::abs(q.probability - (*p_base)[del_good->target_class]));
    // Insertion from zero: at 0.25 the quadrant is fully restored.
    metrics::CausalOptions zero;
    zero.start = metrics::InsertionStart::kZero;
    auto ins_zero = metrics::InsertionCurve(adapter, img, oracle, zero);
    auto p_clean = adapter.PredictOne(img);
    break_err = std::max(break_err, std::abs(ins_zero->points[25].probability -
                                             (*p_clean)[ins_zero->target_class]));
  }
  v.Expect(min_gap >= 0.2,
           absl::StrFormat("min insertion AUC gap oracle-reversed %.4f over %d images (>= 0.2)",
                           min_gap, n));
  v.Expect(del_ordered == n, absl::StrFormat("deletion AUC oracle <= reversed %d/%d",
                                             del_ordered, n));
  v.Expect(break_err <= 1e-9, absl::StrFormat("breakpoint at 0.25 err %.3g (<= 1e-9)", break_err));
  return v;
}

Verdict Ac4MetricUnits() {
  Verdict v;
  const std::vector<metrics::CurvePoint> line = {{0, 0}, {1, 1}};
  const std::vector<metrics::CurvePoint> knee = {{0, 0}, {0.5, 1}, {1, 1}};
  auto a = metrics::CurveAuc(line);
  auto b = metrics::CurveAuc(knee);
  v.Expect(a.ok() && b.ok() && *a == 0.5 && *b == 0.75,
           absl::StrFormat("curve_auc %.17g, %.17g (0.5, 0.75)", a.value_or(-1), b.value_or(-1)));

  auto kl = metrics::KlDiv(Tensor::Matrix({{0.75, 0.25}}), Tensor::Matrix({{0.25, 0.75}}), 1e-15);
  const double kl_err = kl.ok() ? std::abs(*kl - 0.5 * std::log(3.0)) : 1.0;
  v.Expect(kl_err <= 1e-9, absl::StrFormat("KL %.12g (0.549306, err %.3g)", kl.value_or(-1), kl_err));

  auto scc = metrics::Scc(Tensor::Matrix({{1, 2, 2, 3}}), Tensor::Matrix({{1, 3, 2, 4}}));
  const double scc_err = scc.ok() ? std::abs(*scc - 0.894427) : 1.0;
  v.Expect(scc_err <= 1e-9,
           absl::StrFormat("SCC tie case %.12g (stated 0.894427, err %.3g; tie-averaged ranks "
                           "[1,2.5,2.5,4] vs [1,3,2,4] give 3/sqrt(10) = 0.948683)",
                           scc.value_or(-2), scc_err));

  metrics::FixationSet fx;
  fx.image = "2x2";
  fx.width = 2;
  fx.height = 2;
  fx.points = {{"a", 0, 0}, {"a", 0, 1}};
  auto auc = metrics::AucFixation(Tensor::Matrix({{0.9, 0.1}, {0.8, 0.2}}), fx);
  v.Expect(auc.ok() && *auc == 1.0, absl::StrFormat("auc_fixation %.17g (1.0)", auc.value_or(-1)));
  return v;
}

Verdict Ac5Gradient() {
  Verdict v;
  double worst = 0.0;
  int used = 0;
  int skipped = 0;
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    auto cnn = model::BuildReferenceCnn(50 + i);
    const Tensor img = RandomImage(5000 + i);
    auto p = cnn->PredictOne(img);
    auto g = cnn->InputGradient(img, p->Argmax());
    SplitMix64 rng(5100 + i);
    int taken = 0;
    while (taken < 20) {
      const std::size_t idx = rng.NextBelow(img.size());
      Tensor lo = img;
      Tensor hi = img;
      lo[idx] -= 1e-4;
      hi[idx] += 1e-4;
      if (cnn->ActivationSignature(lo) != cnn->ActivationSignature(hi)) {
        ++skipped;
        continue;
      }
      auto fd = oracles::FiniteDifferenceLoss(*cnn, img, p->Argmax(), idx, 1e-4);
      if (!fd.ok()) ok = false;
      worst = std::max(worst, std::abs(fd.value_or(1e9) - (*g)[idx]));
      ++taken;
      ++used;
    }
  }
  v.Expect(ok && worst <= 1e-5,
           absl::StrFormat("max |analytic - central diff| %.3g over %d pixels (<= 1e-5), "
                           "%d near-kink pixels skipped",
                           worst, used, skipped));
  return v;
}

Verdict Ac6Fgsm() {
  Verdict v;
  auto cnn = model::BuildReferenceCnn(7);
  std::vector<double> deltas;
  double excess = 0.0;
  bool in_range = true;
  bool identity = true;
  for (int i = 0; i < 20; ++i) {
    const Tensor img = RandomImage(6000 + i);
    for (double eps : adversarial::DefaultEpsilons()) {
      adversarial::AttackConfig cfg;
      cfg.epsilon = eps;
      auto adv = adversarial::Fgsm(*cnn, img, cfg);
      if (!adv.ok()) {
        in_range = false;
        continue;
      }
      for (std::size_t k = 0; k < img.size(); ++k) {
        excess = std::max(excess, std::abs((*adv)[k] - img[k]) - eps);
        in_range = in_range && (*adv)[k] >= 0.0 && (*adv)[k] <= 1.0;
      }
      if (eps == 0.05) {
        auto p = cnn->PredictOne(img);
        auto pa = cnn->PredictOne(*adv);
        deltas.push_back(model::CrossEntropy(*pa, p->Argmax()) -
                         model::CrossEntropy(*p, p->Argmax()));
      }
    }
    adversarial::AttackConfig zero;
    auto same = adversarial::Fgsm(*cnn, img, zero);
    identity = identity && same.ok() && *same == img;
  }
  std::sort(deltas.begin(), deltas.end());
  const double median = deltas.size() == 20 ? 0.5 * (deltas[9] + deltas[10]) : -1.0;
  v.Expect(excess <= 0.0, absl::StrFormat("max (|adv - clean| - eps) %.3g (<= 0)", excess));
  v.Expect(in_range, "outputs within [0, 1]");
  v.Expect(identity, "eps = 0 is exact identity");
  v.Expect(median > 0.0, absl::StrFormat("median loss increase at eps 0.05: %.6g (> 0)", median));
  return v;
}

Verdict Ac7Reports() {
  Verdict v;
  auto cnn = model::BuildReferenceCnn(11);
  std::vector<adversarial::FixationSample> samples;
  std::vector<Tensor> images;
  for (int i = 0; i < 4; ++i) {
    samples.push_back({absl::StrCat("s", i), RandomImage(7000 + i),
                       cli::UniformFixations(7100 + i, 32, 32, 25)});
    images.push_back(samples.back().image);
  }
  adversarial::RobustnessOptions opts;
  opts.rise.num_masks = 300;
  const std::vector<explain::Method> methods = {explain::Method::kSidu, explain::Method::kRise};
  const std::vector<double> eps = {0.0, 0.05};
  auto report = adversarial::RunFixationRobustness(*cnn, samples, methods, eps, opts);
  if (!report.ok()) {
    v.Expect(false, std::string(report.status().message()));
    return v;
  }
  v.Expect(report->records.size() == methods.size() * eps.size(),
           absl::StrFormat("%d records x 3 metrics", report->records.size()));
  for (explain::Method m : methods) {
    auto clean = adversarial::ScoreAgainstFixations(*cnn, samples, m, opts);
    const adversarial::RobustnessRecord want = adversarial::Summarize(m, 0.0, *clean);
    const adversarial::RobustnessRecord* got = report->Find(m, 0.0);
    v.Expect(got != nullptr && *got == want,
             absl::StrCat(explain::MethodName(m), ": eps 0 row bit-equal to clean evaluation"));
  }
  auto drift = adversarial::RunDriftRobustness(*cnn, images, methods, 0.0, opts);
  if (!drift.ok()) {
    v.Expect(false, std::string(drift.status().message()));
    return v;
  }
  for (const adversarial::RobustnessRecord& r : drift->records) {
    v.Expect(r.mean_scc == 1.0 && r.mean_auc == 1.0 && r.mean_kl <= 1e-6,
             absl::StrFormat("%s drift eps 0: SCC %.17g AUC %.17g KL %.3g",
                             explain::MethodName(r.method), r.mean_scc, r.mean_auc, r.mean_kl));
  }
  return v;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Relative path -> contents for every file under `root`.
std::vector<std::pair<std::string, std::string>> Tree(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out.emplace_back(fs::relative(e.path(), root).string(), Slurp(e.path()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Cli(std::vector<std::string> args) {
  std::vector<const char*> argv = {"sidu"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  return cli::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict Ac8Determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "sidu_acceptance_ac8";
  fs::remove_all(root);
  const fs::path data = root / "data";
  fs::create_directories(data);
  for (int i = 0; i < 20; ++i) {
    auto s = cli::WritePng(RandomImage(8000 + i), (data / absl::StrFormat("img%02d.png", i)).string());
    if (!s.ok()) v.Expect(false, std::string(s.message()));
  }
  {
    std::ofstream cfg(root / "config.json");
    cfg << R"({"model": {"type": "builtin"}, "method": "sidu", "dataset": "data",
               "metrics": {"steps": 100}})";
  }
  const auto start = std::chrono::steady_clock::now();
  for (const char* run : {"run_a", "run_b"}) {
    const std::string out = (root / run).string();
    const std::string config = (root / "config.json").string();
    v.Expect(Cli({"selftest", "--seed", "3", "--out", out}) == 0, absl::StrCat(run, " selftest"));
    v.Expect(Cli({"explain", "--config", config, "--seed", "3", "--out", out,
                  (data / "img00.png").string()}) == 0,
             absl::StrCat(run, " explain"));
    v.Expect(Cli({"eval-causal", "--config", config, "--seed", "3", "--out", out}) == 0,
             absl::StrCat(run, " eval-causal"));
  }
  const double secs = Seconds(start);
  const auto a = Tree(root / "run_a");
  const auto b = Tree(root / "run_b");
  v.Expect(!a.empty() && a == b,
           absl::StrFormat("%d files, trees byte-identical: %s", a.size(), a == b ? "yes" : "no"));
  v.Expect(secs <= 300.0, absl::StrFormat("wall time %.2fs for both runs (<= 300s)", secs));
  fs::remove_all(root);
  return v;
}

Verdict Ac9Invariants() {
  Verdict v;
  SplitMix64 rng(9000);
  bool sd_ok = true;
  for (int i = 0; i < 1000; ++i) {
    Tensor a({10});
    Tensor b({10});
    for (double& x : a.data()) x = rng.Uniform(-3, 3);
    for (double& x : b.data()) x = rng.Uniform(-3, 3);
    PredictionVector pa{*Softmax(a), {}};
    PredictionVector pb = i % 10 == 0 ? pa : PredictionVector{*Softmax(b), {}};
    auto sd = explain::SimilarityDifference(pa, pb, 0.25, Norm::kL2);
    const bool equal = pa.scores == pb.scores;
    sd_ok = sd_ok && sd.ok() && *sd > 0.0 && *sd <= 1.0 && ((*sd == 1.0) == equal);
  }
  v.Expect(sd_ok, "SD in (0, 1], == 1 iff equal, 1000 pairs");

  double scc_dev = 0.0;
  bool auc_same = true;
  for (int t = 0; t < 20; ++t) {
    Tensor em({16, 16});
    Tensor fm({16, 16});
    for (double& x : em.data()) x = std::floor(rng.Uniform(0, 8));
    for (double& x : fm.data()) x = rng.Uniform(0, 1);
    Tensor em2 = em;
    for (double& x : em2.data()) x = x * x;
    auto s1 = metrics::Scc(em, fm);
    auto s2 = metrics::Scc(em2, fm);
    scc_dev = std::max(scc_dev, std::abs(s1.value_or(9) - s2.value_or(-9)));

    const metrics::FixationSet fx = cli::UniformFixations(9100 + t, 16, 16, 30);
    Tensor em3 = em;
    for (double& x : em3.data()) x = std::exp(3.0 * x) - 7.0;
    auto a1 = metrics::AucFixation(em, fx);
    auto a2 = metrics::AucFixation(em2, fx);
    auto a3 = metrics::AucFixation(em3, fx);
    auc_same = auc_same && a1.ok() && a2.ok() && a3.ok() && *a1 == *a2 && *a1 == *a3;
  }
  v.Expect(scc_dev <= 1e-12, absl::StrFormat("SCC monotone-transform dev %.3g (<= 1e-12)", scc_dev));
  v.Expect(auc_same, "auc_fixation identical under monotone transforms");

  auto cnn = model::BuildReferenceCnn(99);
  double min_value = 0.0;
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    auto em = explain::ExplainSidu(*cnn, RandomImage(9500 + i), {});
    ok = ok && em.ok();
    if (em.ok()) min_value = std::min(min_value, em->heatmap.Min());
  }
  v.Expect(ok && min_value >= 0.0,
           absl::StrFormat("min heatmap value over 100 inputs %.3g (>= 0)", min_value));
  return v;
}

}  // namespace
}  // namespace sidu

int main() {
  const std::vector<std::pair<const char*, std::function<sidu::Verdict()>>> criteria = {
      {"AC1 straight-line oracle equivalence", sidu::Ac1StraightLineOracle},
      {"AC2 planted-feature ground truth", sidu::Ac2PlantedFeature},
      {"AC3 causal-metric sanity", sidu::Ac3CausalSanity},
      {"AC4 metric unit oracles", sidu::Ac4MetricUnits},
      {"AC5 gradient fidelity", sidu::Ac5Gradient},
      {"AC6 FGSM contract", sidu::Ac6Fgsm},
      {"AC7 robustness-report structure", sidu::Ac7Reports},
      {"AC8 determinism", sidu::Ac8Determinism},
      {"AC9 invariance suite", sidu::Ac9Invariants},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const sidu::Verdict v = run();
    std::string notes;
    for (const std::string& n : v.notes) notes += (notes.empty() ? "" : "; ") + n;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, notes.c_str());
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
