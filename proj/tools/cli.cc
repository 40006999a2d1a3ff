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

#include "tools/cli.h"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "sidu/report_io.h"
#include "tools/commands.h"
#include "tools/config.h"
#include "tools/selftest.h"

namespace sidu::cli {
namespace {

struct Flags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::string method;
  std::vector<double> epsilons;
  std::string image;
};

absl::StatusOr<RunConfig> ResolveConfig(const Flags& flags) {
  RunConfig cfg;
  if (!flags.config.empty()) {
    absl::StatusOr<RunConfig> loaded = LoadRunConfig(flags.config);
    if (!loaded.ok()) return loaded.status();
    cfg = *std::move(loaded);
  }
  if (flags.seed.has_value()) ApplySeed(*flags.seed, cfg);
  if (!flags.out.empty()) cfg.output = flags.out;
  if (!flags.method.empty()) {
    absl::StatusOr<explain::Method> m = explain::ParseMethod(flags.method);
    if (!m.ok()) return m.status();
    cfg.methods = {*m};
  }
  if (!flags.epsilons.empty()) cfg.attack.epsilons = flags.epsilons;
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  return cfg;
}

absl::Status RunSelftestCommand(const Flags& flags, std::ostream& out) {
  SelftestOptions opts;
  if (flags.seed.has_value()) opts.seed = *flags.seed;
  const std::vector<CheckResult> results = RunSelftest(opts);
  const std::string table = FormatSelftest(results);
  out << table;
  if (!flags.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(flags.out, ec);
    const std::string path = (std::filesystem::path(flags.out) / "selftest.txt").string();
    if (absl::Status s = WriteTextFile(path, table); !s.ok()) return s;
  }
  if (!AllPassed(results)) return absl::InternalError("selftest failed");
  return absl::OkStatus();
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saliency explanations and their evaluation.", "sidu"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON run configuration");
  app.add_option("--seed", flags.seed, "Seed for the builtin model and random masks");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--method", flags.method, "sidu or rise")
      ->check(CLI::IsMember({"sidu", "rise"}));
  app.add_option("--epsilon", flags.epsilons, "Attack strength (repeatable)")
      ->allow_extra_args(false);

  CLI::App* explain_cmd = app.add_subcommand("explain", "Explain one PNG image");
  explain_cmd->add_option("image", flags.image, "8-bit RGB PNG")->required();
  CLI::App* causal_cmd =
      app.add_subcommand("eval-causal", "Insertion and deletion curves over a dataset");
  CLI::App* fixation_cmd =
      app.add_subcommand("eval-fixation", "Compare explanations with eye fixations");
  CLI::App* attack_cmd = app.add_subcommand("attack", "FGSM robustness experiments");
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the embedded oracle suite");
  for (CLI::App* sub : {explain_cmd, causal_cmd, fixation_cmd, attack_cmd, selftest_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "sidu: " << e.what() << "\n" << "run 'sidu --help' for usage\n";
    return 2;
  }

  absl::Status status;
  if (selftest_cmd->parsed()) {
    status = RunSelftestCommand(flags, out);
  } else {
    absl::StatusOr<RunConfig> cfg = ResolveConfig(flags);
    if (!cfg.ok()) {
      status = cfg.status();
    } else if (explain_cmd->parsed()) {
      status = RunExplain(*cfg, flags.image, out);
    } else if (causal_cmd->parsed()) {
      status = RunEvalCausal(*cfg, out);
    } else if (fixation_cmd->parsed()) {
      status = RunEvalFixation(*cfg, out);
    } else if (attack_cmd->parsed()) {
      status = RunAttack(*cfg, out, err);
    }
  }
  if (!status.ok()) err << "sidu: " << status.message() << "\n";
  return ExitCode(status);
}

}  // namespace sidu::cli
