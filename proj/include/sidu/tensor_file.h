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

// Binary tensor files, little-endian:
//
//   "STF1" | u32 version (=1) | u32 rank r >= 1 | r x u32 dims | f32 payload
//
// Values are narrowed to f32 on write and widened to f64 on read.

#ifndef SIDU_TENSOR_FILE_H_
#define SIDU_TENSOR_FILE_H_

#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "sidu/tensor.h"

namespace sidu::model {

inline constexpr uint32_t kTensorFileVersion = 1;

std::string EncodeTensor(const Tensor& t);
// Fails with kDataLoss on bad magic, version, rank or truncation; messages
// carry the byte offset of the problem.
absl::StatusOr<Tensor> DecodeTensor(absl::string_view bytes);

absl::Status WriteTensorFile(const Tensor& t, const std::string& path);
absl::StatusOr<Tensor> ReadTensorFile(const std::string& path);

// 64-bit FNV-1a over the little-endian f32 payload of `image`.
uint64_t ImageHash(const Tensor& image);
std::string ImageHashHex(const Tensor& image);

}  // namespace sidu::model

#endif  // SIDU_TENSOR_FILE_H_
