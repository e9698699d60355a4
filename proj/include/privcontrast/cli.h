//
// Copyright 2026 The PrivContrast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVCONTRAST_CLI_H_
#define PRIVCONTRAST_CLI_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "privcontrast/nn_index.h"

namespace privcontrast {

enum class Command {
  kAudit,
  kResolution,
  kUtility,
  kConnect,
  kPercentiles,
  kPareto,
  kValidate,
};

struct CliConfig {
  Command command = Command::kValidate;
  std::string pairs_path;
  std::string quads_path;
  std::string points_path;
  std::string slacks_path;
  std::vector<std::string> report_paths;
  std::string out_path;
  double delta = 0.0;
  IndexParams index;
  std::size_t top_k = 10;
  std::size_t max_failures = 0;
  bool normalize = true;
  bool include_self_pairs = true;
  std::vector<double> percentiles = {90.0, 95.0, 99.0};

  void validate() const;
};

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPrivacyFailure = 1;
inline constexpr int kExitError = 2;

// Parses argv into a config. Returns nullopt after printing help or a
// usage error; `exit_code` then holds the status to exit with.
std::optional<CliConfig> parse_args(int argc, const char* const* argv,
                                    int& exit_code, std::ostream& out,
                                    std::ostream& err);

// Executes one command. Human-readable summary goes to `out`, diagnostics
// to `err`, full results to config.out_path when set.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_CLI_H_
