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

#include "sidu/tensor_file.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace sidu::model {
namespace {

constexpr char kMagic[4] = {'S', 'T', 'F', '1'};
constexpr uint32_t kMaxRank = 16;

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t GetU32(absl::string_view bytes, std::size_t offset) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

absl::Status Truncated(std::size_t expected, std::size_t actual,
                       absl::string_view what) {
  return absl::DataLossError(absl::StrCat(
      "tensor file truncated in ", what, ": expected ", expected,
      " bytes, got ", actual, " (at byte offset ", actual, ")"));
}

}  // namespace

std::string EncodeTensor(const Tensor& t) {
  std::string out(kMagic, 4);
  PutU32(out, kTensorFileVersion);
  PutU32(out, static_cast<uint32_t>(t.rank()));
  for (int d : t.dims()) PutU32(out, static_cast<uint32_t>(d));
  out.reserve(out.size() + 4 * t.size());
  for (double v : t.data()) PutU32(out, std::bit_cast<uint32_t>(static_cast<float>(v)));
  return out;
}

absl::StatusOr<Tensor> DecodeTensor(absl::string_view bytes) {
  constexpr std::size_t kHeader = 12;
  if (bytes.size() < kHeader) return Truncated(kHeader, bytes.size(), "header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    return absl::DataLossError("bad tensor file magic at byte offset 0");
  }
  const uint32_t version = GetU32(bytes, 4);
  if (version != kTensorFileVersion) {
    return absl::DataLossError(absl::StrCat(
        "unsupported tensor file version ", version, " at byte offset 4"));
  }
  const uint32_t rank = GetU32(bytes, 8);
  if (rank < 1 || rank > kMaxRank) {
    return absl::DataLossError(absl::StrCat(
        "tensor file rank ", rank, " at byte offset 8 must be in [1, ",
        kMaxRank, "]"));
  }
  const std::size_t dims_end = kHeader + 4 * static_cast<std::size_t>(rank);
  if (bytes.size() < dims_end) return Truncated(dims_end, bytes.size(), "dims");
  std::vector<int> dims(rank);
  std::size_t count = 1;
  for (uint32_t i = 0; i < rank; ++i) {
    const uint32_t d = GetU32(bytes, kHeader + 4 * i);
    if (d == 0 || d > static_cast<uint32_t>(INT32_MAX)) {
      return absl::DataLossError(absl::StrCat("invalid dim ", d,
                                              " at byte offset ",
                                              kHeader + 4 * i));
    }
    dims[i] = static_cast<int>(d);
    count *= d;
  }
  const std::size_t expected = dims_end + 4 * count;
  if (bytes.size() < expected) return Truncated(expected, bytes.size(), "payload");
  if (bytes.size() > expected) {
    return absl::DataLossError(absl::StrCat("trailing bytes after payload at byte offset ",
                                            expected));
  }
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<float>(GetU32(bytes, dims_end + 4 * i));
  }
  return Tensor::FromData(std::move(dims), std::move(data));
}

absl::Status WriteTensorFile(const Tensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path, " for writing"));
  const std::string bytes = EncodeTensor(t);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<Tensor> ReadTensorFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open tensor file ", path));
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  absl::StatusOr<Tensor> t = DecodeTensor(bytes);
  if (!t.ok()) {
    return absl::Status(t.status().code(),
                        absl::StrCat(path, ": ", t.status().message()));
  }
  return t;
}

uint64_t ImageHash(const Tensor& image) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : image.data()) {
    const uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(v));
    for (int i = 0; i < 4; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string ImageHashHex(const Tensor& image) {
  return absl::StrFormat("%016x", ImageHash(image));
}

}  // namespace sidu::model
