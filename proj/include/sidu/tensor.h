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

#ifndef SIDU_TENSOR_H_
#define SIDU_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

// Aborts with a message when an internal invariant does not hold. Reserved for
// programming errors; input validation goes through absl::Status.
#define SIDU_CHECK(cond)                                                 \
  do {                                                                   \
    if (!(cond)) ::sidu::internal::CheckFailed(#cond, __FILE__, __LINE__); \
  } while (false)

namespace sidu {
namespace internal {
[[noreturn]] void CheckFailed(const char* expr, const char* file, int line);
}  // namespace internal

// Dense row-major array of doubles with rank >= 1 and strictly positive dims.
//
// Images are stored as H x W x C (channel-last), feature maps as n x n x N and
// single-channel maps as H x W.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> dims, double fill = 0.0);

  // Validating factory: dims must be positive and data.size() must equal the
  // product of dims.
  static absl::StatusOr<Tensor> FromData(std::vector<int> dims,
                                         std::vector<double> data);

  static Tensor Matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor Vector(std::initializer_list<double> values);
  static Tensor Vector(std::vector<double> values);

  int rank() const { return static_cast<int>(dims_.size()); }
  int dim(int axis) const { return dims_[axis]; }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Rank-2 access.
  double& at(int y, int x) { return data_[Index2(y, x)]; }
  double at(int y, int x) const { return data_[Index2(y, x)]; }
  // Rank-3 access.
  double& at(int y, int x, int c) { return data_[Index3(y, x, c)]; }
  double at(int y, int x, int c) const { return data_[Index3(y, x, c)]; }

  bool SameDims(const Tensor& other) const { return dims_ == other.dims_; }
  bool AllFinite() const;
  double Min() const;
  double Max() const;
  double Sum() const;

  // Extracts channel `c` of a rank-3 tensor as a rank-2 tensor.
  Tensor Channel(int c) const;

  std::string DimsString() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

 private:
  std::size_t Index2(int y, int x) const {
    return static_cast<std::size_t>(y) * dims_[1] + x;
  }
  std::size_t Index3(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * dims_[1] + x) * dims_[2] + c;
  }

  std::vector<int> dims_;
  std::vector<double> data_;
};

}  // namespace sidu

#endif  // SIDU_TENSOR_H_
