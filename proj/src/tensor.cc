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

#include "sidu/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace sidu {
namespace internal {

void CheckFailed(const char* expr, const char* file, int line) {
  std::fprintf(stderr, "%s:%d: check failed: %s\n", file, line, expr);
  std::abort();
}

}  // namespace internal

namespace {

std::size_t Product(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

bool DimsValid(const std::vector<int>& dims) {
  return !dims.empty() &&
         std::all_of(dims.begin(), dims.end(), [](int d) { return d > 0; });
}

}  // namespace

Tensor::Tensor(std::vector<int> dims, double fill) : dims_(std::move(dims)) {
  SIDU_CHECK(DimsValid(dims_));
  data_.assign(Product(dims_), fill);
}

absl::StatusOr<Tensor> Tensor::FromData(std::vector<int> dims,
                                        std::vector<double> data) {
  if (!DimsValid(dims)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tensor dims must be non-empty and positive, got [",
                     absl::StrJoin(dims, ","), "]"));
  }
  if (Product(dims) != data.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tensor data length ", data.size(),
                     " does not match dims [", absl::StrJoin(dims, ","), "]"));
  }
  Tensor t;
  t.dims_ = std::move(dims);
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::Matrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  SIDU_CHECK(rows.size() > 0);
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.begin()->size());
  Tensor t({h, w});
  std::size_t i = 0;
  for (const auto& row : rows) {
    SIDU_CHECK(static_cast<int>(row.size()) == w);
    for (double v : row) t.data_[i++] = v;
  }
  return t;
}

Tensor Tensor::Vector(std::initializer_list<double> values) {
  return Vector(std::vector<double>(values));
}

Tensor Tensor::Vector(std::vector<double> values) {
  SIDU_CHECK(!values.empty());
  Tensor t;
  t.dims_ = {static_cast<int>(values.size())};
  t.data_ = std::move(values);
  return t;
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Tensor::Min() const {
  SIDU_CHECK(!data_.empty());
  return *std::min_element(data_.begin(), data_.end());
}

double Tensor::Max() const {
  SIDU_CHECK(!data_.empty());
  return *std::max_element(data_.begin(), data_.end());
}

double Tensor::Sum() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

Tensor Tensor::Channel(int c) const {
  SIDU_CHECK(rank() == 3 && c >= 0 && c < dims_[2]);
  Tensor out({dims_[0], dims_[1]});
  for (int y = 0; y < dims_[0]; ++y) {
    for (int x = 0; x < dims_[1]; ++x) out.at(y, x) = at(y, x, c);
  }
  return out;
}

std::string Tensor::DimsString() const {
  return absl::StrJoin(dims_, "x");
}

}  // namespace sidu
