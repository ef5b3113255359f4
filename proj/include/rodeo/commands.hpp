// Copyright 2026 The rodeo-dos Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rodeo/config.hpp"

namespace rodeo {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailure = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json manifest;             // also written to <output>/<name>_manifest.json
  std::vector<std::string> artifacts;  // paths written, manifest last
};

/// Runs one of exact, scan, refine, thermo, validate. Errors propagate as
/// rodeo::Error; a failed validation returns kExitValidationFailure.
CommandResult run_subcommand(std::string_view name, const RunConfig& config, std::ostream& log);

/// {"error": kind, "message": ...} for the CLI's stderr report.
nlohmann::json error_report(const std::exception& e);
int exit_code_for(const std::exception& e);

}  // namespace rodeo
