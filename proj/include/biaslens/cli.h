//
// Copyright 2026 The BiasLens Authors
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

#ifndef BIASLENS_CLI_H_
#define BIASLENS_CLI_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace biaslens {

inline constexpr char kCacheDirEnv[] = "BIASLENS_CACHE_DIR";
inline constexpr char kApiTokenEnv[] = "BIASLENS_API_TOKEN";

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitTransport = 2,
  kExitData = 3,
};

// InvalidArgument and NotFound are user/validation errors; Unavailable,
// DeadlineExceeded and DataLoss are backend errors; anything else is a data
// error.
int ExitCodeFor(const absl::Status& status);

// Effective settings for one command: built-in defaults, overridden by the
// config file, overridden by flags. Keys are snake_case flag names.
struct RunConfig {
  std::string command;
  nlohmann::ordered_json values;
  std::vector<std::string> warnings;
};

// Reads a JSON object. Malformed JSON fails with InvalidArgument carrying
// the byte offset of the error.
absl::StatusOr<nlohmann::ordered_json> LoadConfig(const std::string& path);

// Merges `file` (may be null) and `flags` over the command's defaults,
// type-checks every value, and verifies required keys and input paths.
// Unknown file keys produce warnings.
absl::StatusOr<RunConfig> ResolveConfig(const std::string& command,
                                        const nlohmann::ordered_json& file,
                                        const nlohmann::ordered_json& flags);

// Entry point shared by the binary and tests. `args` excludes the program
// name.
int RunCli(const std::vector<std::string>& args,
           const std::map<std::string, std::string>& env, std::ostream& out,
           std::ostream& err);

}  // namespace biaslens

#endif  // BIASLENS_CLI_H_
