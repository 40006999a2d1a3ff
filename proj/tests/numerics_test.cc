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

#include "sidu/numerics.h"

#include <cmath>

#include "gtest/gtest.h"
#include "sidu/oracles.h"
#include "sidu/random.h"
#include "sidu/tensor.h"

namespace sidu {
namespace {

Tensor RandomMatrix(uint64_t seed, int h, int w) {
  SplitMix64 rng(seed);
  Tensor t({h, w});
  for (double& v : t.data()) v = rng.Uniform(-1.0, 1.0);
  return t;
}

Tensor Transpose(const Tensor& t) {
  Tensor out({t.dim(1), t.dim(0)});
  for (int y = 0; y < t.dim(0); ++y) {
    for (int x = 0; x < t.dim(1); ++x) out.at(x, y) = t.at(y, x);
  }
  return out;
}

TEST(BilinearResizeTest, ConstantFieldStaysConstant) {
  absl::StatusOr<Tensor> out = BilinearResize(Tensor::Matrix({{0.7}}), 5, 3);
  ASSERT_TRUE(out.ok());
  for (double v : out->data()) EXPECT_EQ(v, 0.7);
}

TEST(BilinearResizeTest, RampRowsAreMonotone) {
  absl::StatusOr<Tensor> out = BilinearResize(Tensor::Matrix({{0, 1}, {0, 1}}), 2, 4);
  ASSERT_TRUE(out.ok());
  for (int y = 0; y < 2; ++y) {
    EXPECT_EQ(out->at(y, 0), 0.0);
    EXPECT_EQ(out->at(y, 3), 1.0);
    for (int x = 1; x < 4; ++x) EXPECT_GE(out->at(y, x), out->at(y, x - 1));
  }
}

TEST(BilinearResizeTest, MatchesTentOracleAndHandTable) {
  const Tensor src = Tensor::Matrix({{0, 1}, {1, 0}});
  absl::StatusOr<Tensor> out = BilinearResize(src, 4, 4);
  ASSERT_TRUE(out.ok());
  const Tensor tent = oracles::TentResize(src, 4, 4);
  const Tensor hand = Tensor::Matrix({{0, 0.25, 0.75, 1},
                                      {0.25, 0.375, 0.625, 0.75},
                                      {0.75, 0.625, 0.375, 0.25},
                                      {1, 0.75, 0.25, 0}});
  for (std::size_t i = 0; i < out->size(); ++i) {
    EXPECT_NEAR((*out)[i], tent[i], 1e-12);
    EXPECT_NEAR((*out)[i], hand[i], 1e-12);
  }
}

TEST(BilinearResizeTest, RandomSourcesMatchTentOracle) {
  for (int t = 0; t < 10; ++t) {
    const Tensor src = RandomMatrix(t, 3 + t % 4, 2 + t % 5);
    const int oh = 1 + 3 * t;
    const int ow = 2 + 5 * t;
    absl::StatusOr<Tensor> out = BilinearResize(src, oh, ow);
    ASSERT_TRUE(out.ok());
    const Tensor want = oracles::TentResize(src, oh, ow);
    for (std::size_t i = 0; i < out->size(); ++i) EXPECT_NEAR((*out)[i], want[i], 1e-12);
  }
}

TEST(BilinearResizeTest, SameSizeIsIdentity) {
  const Tensor src = RandomMatrix(1, 6, 9);
  absl::StatusOr<Tensor> out = BilinearResize(src, 6, 9);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out, src);
}

TEST(BilinearResizeTest, CommutesWithTranspose) {
  const Tensor src = RandomMatrix(2, 5, 7);
  absl::StatusOr<Tensor> a = BilinearResize(src, 11, 4);
  absl::StatusOr<Tensor> b = BilinearResize(Transpose(src), 4, 11);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, Transpose(*b));
}

TEST(BilinearResizeTest, StaysWithinSourceRange) {
  const Tensor src = RandomMatrix(3, 4, 4);
  absl::StatusOr<Tensor> out = BilinearResize(src, 17, 23);
  ASSERT_TRUE(out.ok());
  EXPECT_GE(out->Min(), src.Min());
  EXPECT_LE(out->Max(), src.Max());
}

TEST(BilinearResizeTest, RejectsEmptyTarget) {
  EXPECT_EQ(BilinearResize(Tensor::Matrix({{1}}), 0, 3).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(BilinearResizeImageTest, ResizesEveryChannel) {
  Tensor img({2, 2, 3});
  for (int c = 0; c < 3; ++c) img.at(1, 1, c) = c + 1.0;
  absl::StatusOr<Tensor> out = BilinearResizeImage(img, 4, 4);
  ASSERT_TRUE(out.ok());
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(out->at(3, 3, c), c + 1.0);
}

TEST(GaussianBlurTest, ConstantImageUnchanged) {
  absl::StatusOr<Tensor> out = GaussianBlur(Tensor({9, 13}, 0.3), 2.0);
  ASSERT_TRUE(out.ok());
  for (double v : out->data()) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(GaussianBlurTest, ImpulseMatchesDirectKernel) {
  Tensor impulse({61, 61});
  impulse.at(30, 30) = 1.0;
  const double sigma = 4.5;
  absl::StatusOr<Tensor> out = GaussianBlur(impulse, sigma);
  ASSERT_TRUE(out.ok());
  const Tensor bump = oracles::GaussianBump(61, 61, 30, 30, sigma);
  const int r = static_cast<int>(std::ceil(3 * sigma));
  // Ratios against the center value remove the normalization constant.
  for (int y = 30 - r; y <= 30 + r; ++y) {
    for (int x = 30 - r; x <= 30 + r; ++x) {
      EXPECT_NEAR(out->at(y, x) / out->at(30, 30), bump.at(y, x), 1e-9);
    }
  }
  EXPECT_EQ(out->at(30, 30 + r + 1), 0.0);
}

TEST(GaussianBlurTest, InteriorImpulsePreservesMass) {
  Tensor impulse({40, 40});
  impulse.at(20, 20) = 2.5;
  absl::StatusOr<Tensor> out = GaussianBlur(impulse, 3.0);
  ASSERT_TRUE(out.ok());
  EXPECT_NEAR(out->Sum(), 2.5, 1e-12);
}

TEST(GaussianBlurTest, CommutesWithOffset) {
  const Tensor src = RandomMatrix(5, 12, 15);
  Tensor shifted = src;
  for (double& v : shifted.data()) v += 3.25;
  absl::StatusOr<Tensor> a = GaussianBlur(src, 2.2);
  absl::StatusOr<Tensor> b = GaussianBlur(shifted, 2.2);
  ASSERT_TRUE(a.ok() && b.ok());
  for (std::size_t i = 0; i < a->size(); ++i) EXPECT_NEAR((*a)[i] + 3.25, (*b)[i], 1e-12);
}

TEST(GaussianBlurTest, RejectsNonPositiveSigma) {
  EXPECT_EQ(GaussianBlur(Tensor({3, 3}), 0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(GaussianBlur(Tensor({3, 3}), -1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(SoftmaxTest, HandCases) {
  absl::StatusOr<Tensor> a = Softmax(Tensor::Vector({0, 0}));
  absl::StatusOr<Tensor> b = Softmax(Tensor::Vector({1000, 1000}));
  absl::StatusOr<Tensor> c = Softmax(Tensor::Vector({std::log(1.0), std::log(3.0)}));
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ((*a)[0], 0.5);
  EXPECT_EQ((*b)[1], 0.5);
  EXPECT_NEAR((*c)[0], 0.25, 1e-12);
  EXPECT_NEAR((*c)[1], 0.75, 1e-12);
}

TEST(SoftmaxTest, SumsToOne) {
  Tensor logits({50});
  SplitMix64 rng(8);
  for (double& v : logits.data()) v = rng.Uniform(-30, 30);
  absl::StatusOr<Tensor> p = Softmax(logits);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR(p->Sum(), 1.0, 1e-12);
  EXPECT_GT(p->Min(), 0.0);
}

TEST(SoftmaxTest, RejectsEmpty) {
  EXPECT_FALSE(Softmax(Tensor()).ok());
}

TEST(DistanceTest, HandCases) {
  const std::vector<double> a = {1, 0};
  const std::vector<double> b = {0, 1};
  EXPECT_NEAR(*L2Distance(a, b), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(*L2Distance(a, a), 0.0);
  EXPECT_EQ(*L1Distance(a, b), 2.0);
  EXPECT_EQ(*Distance(a, b, Norm::kL1), 2.0);
}

TEST(DistanceTest, TriangleInequalityAndSymmetry) {
  SplitMix64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(6), b(6), c(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = rng.Uniform(-1, 1);
      b[i] = rng.Uniform(-1, 1);
      c[i] = rng.Uniform(-1, 1);
    }
    EXPECT_LE(*L2Distance(a, c), *L2Distance(a, b) + *L2Distance(b, c) + 1e-15);
    EXPECT_EQ(*L2Distance(a, b), *L2Distance(b, a));
  }
}

TEST(DistanceTest, LengthMismatch) {
  const std::vector<double> a = {1, 0};
  const std::vector<double> b = {0, 1, 2};
  EXPECT_EQ(L2Distance(a, b).status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(NormTest, ParseRoundTrip) {
  EXPECT_EQ(*ParseNorm(NormName(Norm::kL1)), Norm::kL1);
  EXPECT_EQ(*ParseNorm(NormName(Norm::kL2)), Norm::kL2);
  EXPECT_FALSE(ParseNorm("linf").ok());
}

TEST(TensorTest, FromDataValidatesSize) {
  EXPECT_FALSE(Tensor::FromData({2, 2}, {1, 2, 3}).ok());
  EXPECT_FALSE(Tensor::FromData({0, 2}, {}).ok());
  absl::StatusOr<Tensor> t = Tensor::FromData({1, 3}, {1, 2, 3});
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->at(0, 2), 3.0);
}

}  // namespace
}  // namespace sidu
