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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "sidu/explain.h"
#include "sidu/file_adapter.h"
#include "sidu/model.h"
#include "sidu/oracles.h"
#include "sidu/quadrant_adapter.h"
#include "sidu/random.h"
#include "sidu/reference_cnn.h"
#include "sidu/tensor_file.h"
#include "tools/fixtures.h"

namespace sidu::model {
namespace {

namespace fs = std::filesystem;
using cli::RandomImage;

TEST(ReferenceCnnTest, ShapesFollowArchitecture) {
  auto cnn = BuildReferenceCnn(1);
  const Tensor img = RandomImage(1);
  absl::StatusOr<PredictionVector> p = cnn->PredictOne(img);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->num_classes(), 10);
  EXPECT_NEAR(p->scores.Sum(), 1.0, 1e-12);
  absl::StatusOr<FeatureMaps> fm = cnn->GetFeatureMaps(img);
  ASSERT_TRUE(fm.ok());
  EXPECT_EQ(fm->maps.dims(), (std::vector<int>{16, 16, 16}));
  EXPECT_EQ(fm->side(), 16);
  EXPECT_EQ(fm->count(), 16);
  EXPECT_EQ(cnn->weights().conv1.size(), 8u * 3 * 3 * 3);
  EXPECT_EQ(cnn->weights().conv2.size(), 16u * 8 * 3 * 3);
  EXPECT_EQ(cnn->weights().dense.size(), 10u * 16);
}

TEST(ReferenceCnnTest, SameSeedIsBitIdentical) {
  auto a = BuildReferenceCnn(42);
  auto b = BuildReferenceCnn(42);
  auto c = BuildReferenceCnn(43);
  const Tensor img = RandomImage(5);
  EXPECT_EQ(a->PredictOne(img)->scores, b->PredictOne(img)->scores);
  EXPECT_NE(a->PredictOne(img)->scores, c->PredictOne(img)->scores);
  EXPECT_EQ(a->GetFeatureMaps(img)->maps, b->GetFeatureMaps(img)->maps);
}

TEST(ReferenceCnnTest, DefaultBiasIsApplied) {
  auto cnn = BuildReferenceCnn(3);
  for (double b : cnn->weights().bias1) EXPECT_EQ(b, 0.05);
  for (double b : cnn->weights().dense_bias) EXPECT_EQ(b, 0.05);
}

TEST(ReferenceCnnTest, ZeroImageWithZeroBiasGivesZeroMaps) {
  ReferenceCnnOptions opts;
  opts.bias = 0.0;
  auto cnn = BuildReferenceCnn(9, opts);
  absl::StatusOr<FeatureMaps> fm = cnn->GetFeatureMaps(Tensor({32, 32, 3}));
  ASSERT_TRUE(fm.ok());
  EXPECT_EQ(fm->maps.Max(), 0.0);
  EXPECT_EQ(fm->maps.Min(), 0.0);
}

TEST(ReferenceCnnTest, BatchEqualsSingles) {
  auto cnn = BuildReferenceCnn(2);
  std::vector<Tensor> imgs;
  for (int i = 0; i < 7; ++i) imgs.push_back(RandomImage(100 + i));
  absl::StatusOr<std::vector<PredictionVector>> batch = cnn->Predict(imgs);
  ASSERT_TRUE(batch.ok());
  for (int i = 0; i < 7; ++i) EXPECT_EQ((*batch)[i].scores, cnn->PredictOne(imgs[i])->scores);
  absl::StatusOr<std::vector<PredictionVector>> all = PredictAll(*cnn, imgs, 3);
  ASSERT_TRUE(all.ok());
  for (int i = 0; i < 7; ++i) EXPECT_EQ((*all)[i].scores, (*batch)[i].scores);
}

TEST(ReferenceCnnTest, RejectsWrongDimsAndOversizedBatch) {
  auto cnn = BuildReferenceCnn(2);
  EXPECT_EQ(cnn->PredictOne(Tensor({16, 16, 3})).status().code(),
            absl::StatusCode::kInvalidArgument);
  std::vector<Tensor> many(65, RandomImage(1));
  EXPECT_EQ(cnn->Predict(many).status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_TRUE(PredictAll(*cnn, many).ok());
  EXPECT_EQ(cnn->InputGradient(RandomImage(1), 10).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ReferenceCnnTest, GradientMatchesFiniteDifferences) {
  for (int s = 0; s < 3; ++s) {
    auto cnn = BuildReferenceCnn(20 + s);
    const Tensor img = RandomImage(200 + s);
    for (int target : {0, 4, 9}) {
      absl::StatusOr<Tensor> g = cnn->InputGradient(img, target);
      ASSERT_TRUE(g.ok());
      EXPECT_EQ(g->dims(), img.dims());
      SplitMix64 rng(300 + s);
      for (int k = 0; k < 20; ++k) {
        const std::size_t idx = rng.NextBelow(img.size());
        Tensor lo = img;
        Tensor hi = img;
        lo[idx] -= 1e-4;
        hi[idx] += 1e-4;
        if (cnn->ActivationSignature(lo) != cnn->ActivationSignature(hi)) continue;
        absl::StatusOr<double> fd = oracles::FiniteDifferenceLoss(*cnn, img, target, idx, 1e-4);
        ASSERT_TRUE(fd.ok());
        EXPECT_NEAR(*fd, (*g)[idx], 1e-5);
      }
    }
  }
}

TEST(ReferenceCnnTest, LipschitzBoundHoldsForSinglePixelChanges) {
  auto cnn = BuildReferenceCnn(6);
  const double k = cnn->LipschitzBound();
  SplitMix64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const Tensor img = RandomImage(600 + t);
    Tensor moved = img;
    const int y = static_cast<int>(rng.NextBelow(32));
    const int x = static_cast<int>(rng.NextBelow(32));
    const double delta = 0.3;
    for (int c = 0; c < 3; ++c) moved.at(y, x, c) = std::max(0.0, img.at(y, x, c) - delta);
    const auto p = cnn->PredictOne(img);
    const auto q = cnn->PredictOne(moved);
    for (int c = 0; c < 10; ++c) EXPECT_LE(std::abs((*p)[c] - (*q)[c]), k * delta + 1e-15);
  }
}

TEST(PredictionVectorTest, ArgmaxTiesGoLow) {
  PredictionVector p{Tensor::Vector({0.2, 0.4, 0.4}), {}};
  EXPECT_EQ(p.Argmax(), 1);
}

TEST(CrossEntropyTest, Values) {
  PredictionVector p{Tensor::Vector({0.25, 0.75}), {}};
  EXPECT_DOUBLE_EQ(CrossEntropy(p, 1), -std::log(0.75));
  PredictionVector zero{Tensor::Vector({0.0, 1.0}), {}};
  EXPECT_TRUE(std::isfinite(CrossEntropy(zero, 0)));
}

TEST(QuadrantAdapterTest, ScoresQuadrantMean) {
  QuadrantAdapter adapter;
  Tensor img({32, 32, 3});
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = 0.8;
    }
  }
  absl::StatusOr<PredictionVector> p = adapter.PredictOne(img);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR((*p)[0], 0.8, 1e-12);
  EXPECT_NEAR((*p)[1], 0.2, 1e-12);
  absl::StatusOr<FeatureMaps> fm = adapter.GetFeatureMaps(img);
  ASSERT_TRUE(fm.ok());
  EXPECT_EQ(fm->maps.dims(), (std::vector<int>{32, 32, 4}));
  for (int q = 0; q < 4; ++q) EXPECT_EQ(fm->maps.Channel(q), QuadrantIndicator(32, q));
}

TEST(QuadrantAdapterTest, GradientMatchesFiniteDifferencesOnOddSide) {
  QuadrantAdapterOptions opts;
  opts.side = 9;
  opts.scoring_quadrant = 3;
  QuadrantAdapter adapter(opts);
  const Tensor img = RandomImage(4, 9);
  for (int target : {0, 1}) {
    absl::StatusOr<Tensor> g = adapter.InputGradient(img, target);
    ASSERT_TRUE(g.ok());
    for (std::size_t i = 0; i < img.size(); i += 7) {
      absl::StatusOr<double> fd = oracles::FiniteDifferenceLoss(adapter, img, target, i, 1e-6);
      ASSERT_TRUE(fd.ok());
      EXPECT_NEAR(*fd, (*g)[i], 1e-6);
    }
  }
}

TEST(QuadrantAdapterTest, GradientsCanBeDisabled) {
  QuadrantAdapterOptions opts;
  opts.has_gradients = false;
  QuadrantAdapter adapter(opts);
  EXPECT_EQ(adapter.InputGradient(RandomImage(1), 0).status().code(),
            absl::StatusCode::kUnimplemented);
}

TEST(TensorFileTest, RoundTripAndCorruption) {
  Tensor t({2, 3, 4});
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.25 * i;
  const std::string bytes = EncodeTensor(t);
  absl::StatusOr<Tensor> back = DecodeTensor(bytes);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, t);
  EXPECT_EQ(DecodeTensor(bytes.substr(0, bytes.size() - 3)).status().code(),
            absl::StatusCode::kDataLoss);
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(DecodeTensor(bad).status().code(), absl::StatusCode::kDataLoss);
  EXPECT_EQ(DecodeTensor(bytes + "zz").status().code(), absl::StatusCode::kDataLoss);
}

TEST(TensorFileTest, HashDependsOnContent) {
  const Tensor a = RandomImage(1, 4);
  Tensor b = a;
  b[5] += 0.01;
  EXPECT_EQ(ImageHash(a), ImageHash(a));
  EXPECT_NE(ImageHash(a), ImageHash(b));
  EXPECT_EQ(ImageHashHex(a).size(), 16u);
}

class FileAdapterTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sidu_file_adapter_" + std::string(
               ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Records `images` as scored by `source` and returns the manifest path.
  std::string WriteManifest(const ModelAdapter& source, const std::vector<Tensor>& images) {
    std::ofstream manifest(dir_ / "manifest.json");
    manifest << "{";
    for (std::size_t i = 0; i < images.size(); ++i) {
      const std::string hex = ImageHashHex(images[i]);
      EXPECT_TRUE(WriteTensorFile(source.PredictOne(images[i])->scores,
                                  (dir_ / (hex + ".pred.stf")).string())
                      .ok());
      EXPECT_TRUE(WriteTensorFile(source.GetFeatureMaps(images[i])->maps,
                                  (dir_ / (hex + ".fm.stf")).string())
                      .ok());
      manifest << (i ? "," : "") << "\"" << hex << "\": {\"prediction\": \"" << hex
               << ".pred.stf\", \"feature_maps\": \"" << hex << ".fm.stf\"}";
    }
    manifest << "}";
    return (dir_ / "manifest.json").string();
  }

  fs::path dir_;
};

TEST_F(FileAdapterTest, LooksUpRecordsByContent) {
  auto cnn = BuildReferenceCnn(1);
  const std::vector<Tensor> imgs = {RandomImage(1), RandomImage(2)};
  FileAdapterOptions opts{32, 32, 3};
  absl::StatusOr<std::unique_ptr<FileAdapter>> fa =
      BuildFileAdapter(WriteManifest(*cnn, imgs), opts);
  ASSERT_TRUE(fa.ok()) << fa.status();
  EXPECT_EQ((*fa)->num_records(), 2u);
  EXPECT_FALSE((*fa)->capabilities().has_gradients);
  for (const Tensor& img : imgs) {
    absl::StatusOr<PredictionVector> p = (*fa)->PredictOne(img);
    ASSERT_TRUE(p.ok());
    for (int c = 0; c < 10; ++c) EXPECT_NEAR((*p)[c], (*cnn->PredictOne(img))[c], 1e-7);
    EXPECT_EQ((*fa)->GetFeatureMaps(img)->maps.dims(), (std::vector<int>{16, 16, 16}));
  }
  absl::StatusOr<PredictionVector> miss = (*fa)->PredictOne(RandomImage(3));
  EXPECT_EQ(miss.status().code(), absl::StatusCode::kNotFound);
  EXPECT_EQ((*fa)->InputGradient(imgs[0], 0).status().code(),
            absl::StatusCode::kUnimplemented);
}

TEST_F(FileAdapterTest, ExplanationMatchesLiveModel) {
  auto cnn = BuildReferenceCnn(4);
  const Tensor img = RandomImage(44);
  // Masked inputs are derived from the stored (single precision) maps, as an
  // external exporter would.
  const std::string fm_path = (dir_ / "tmp.stf").string();
  ASSERT_TRUE(WriteTensorFile(cnn->GetFeatureMaps(img)->maps, fm_path).ok());
  FeatureMaps stored{*ReadTensorFile(fm_path), "stored"};
  absl::StatusOr<explain::MaskSet> masks = explain::BuildMaskSet(stored, 32, 32, {});
  ASSERT_TRUE(masks.ok());
  absl::StatusOr<std::vector<Tensor>> masked = explain::MaskedImages(img, *masks);
  ASSERT_TRUE(masked.ok());
  std::vector<Tensor> all = {img};
  all.insert(all.end(), masked->begin(), masked->end());
  FileAdapterOptions opts{32, 32, 3};
  absl::StatusOr<std::unique_ptr<FileAdapter>> fa = BuildFileAdapter(WriteManifest(*cnn, all), opts);
  ASSERT_TRUE(fa.ok()) << fa.status();
  absl::StatusOr<explain::ExplanationMap> via_file = explain::ExplainSidu(**fa, img, {});
  absl::StatusOr<explain::ExplanationMap> live = explain::ExplainSidu(*cnn, img, {});
  ASSERT_TRUE(via_file.ok()) << via_file.status();
  ASSERT_TRUE(live.ok());
  EXPECT_EQ(via_file->predicted_class, live->predicted_class);
  const double scale = live->heatmap.Max();
  for (std::size_t i = 0; i < img.size() / 3; ++i) {
    EXPECT_NEAR(via_file->heatmap[i], live->heatmap[i], 1e-4 * scale);
  }
}

TEST_F(FileAdapterTest, MalformedManifests) {
  {
    std::ofstream(dir_ / "bad.json") << "{not json";
  }
  absl::StatusOr<std::unique_ptr<FileAdapter>> a = BuildFileAdapter((dir_ / "bad.json").string());
  EXPECT_EQ(a.status().code(), absl::StatusCode::kInvalidArgument);
  {
    std::ofstream(dir_ / "key.json") << R"({"xyz": {"prediction": "a", "feature_maps": "b"}})";
  }
  EXPECT_EQ(BuildFileAdapter((dir_ / "key.json").string()).status().code(),
            absl::StatusCode::kInvalidArgument);
  {
    std::ofstream(dir_ / "missing.json")
        << R"({"0123456789abcdef": {"prediction": "nope.stf", "feature_maps": "nope.stf"}})";
  }
  EXPECT_EQ(BuildFileAdapter((dir_ / "missing.json").string()).status().code(),
            absl::StatusCode::kNotFound);
}

TEST_F(FileAdapterTest, LogitsAreNormalized) {
  const Tensor img = RandomImage(8);
  const std::string hex = ImageHashHex(img);
  ASSERT_TRUE(WriteTensorFile(Tensor::Vector({1.0, 2.0, 3.0}), (dir_ / "p.stf").string()).ok());
  ASSERT_TRUE(WriteTensorFile(Tensor({4, 4, 2}, 1.0), (dir_ / "f.stf").string()).ok());
  {
    std::ofstream(dir_ / "m.json")
        << "{\"" << hex << "\": {\"prediction\": \"p.stf\", \"feature_maps\": \"f.stf\"}}";
  }
  FileAdapterOptions opts{32, 32, 3};
  auto fa = BuildFileAdapter((dir_ / "m.json").string(), opts);
  ASSERT_TRUE(fa.ok()) << fa.status();
  absl::StatusOr<PredictionVector> p = (*fa)->PredictOne(img);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR(p->scores.Sum(), 1.0, 1e-12);
  EXPECT_EQ(p->Argmax(), 2);
}

}  // namespace
}  // namespace sidu::model
