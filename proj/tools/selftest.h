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

// Embedded oracle suite run by `sidu selftest`. Every check compares the live
// implementation against an independent computation or a hand-derived value.

#ifndef SIDU_TOOLS_SELFTEST_H_
#define SIDU_TOOLS_SELFTEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sidu/explain.h"

namespace sidu::cli {

struct SelftestOptions {
  uint64_t seed = 0;
  // Defaults under test; the SD check expects the shipped sigma.
  explain::SiduConfig sidu;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> RunSelftest(const SelftestOptions& options = {});

// Fixed-width table plus a count line; contains no timings.
std::string FormatSelftest(const std::vector<CheckResult>& results);

bool AllPassed(const std::vector<CheckResult>& results);

}  // namespace sidu::cli

#endif  // SIDU_TOOLS_SELFTEST_H_
