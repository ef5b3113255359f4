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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rodeo/evolution.hpp"
#include "rodeo/pauli.hpp"
#include "rodeo/rodeo.hpp"

namespace rodeo {

struct ThermoSpec {
  double t_min = 0.05;
  double t_max = 10;
  std::size_t points = 200;
  double imag = 0;              // b in B = beta + i b
  bool clamp_negative = true;   // zero negative rodeo weights before use
  std::string input;            // scan CSV; empty means <output>/scan.csv
};

struct RefineSpec {
  EnergyGrid grid{-1.4, -0.6, 0.005};
  double dev = 200;
};

/// Everything a subcommand consumes. Every field has a documented default and
/// a dotted key (see config_keys()).
struct RunConfig {
  TfimParams model;
  std::string hamiltonian_file;  // optional JSON Hamiltonian replacing the TFIM
  RodeoParams rodeo;
  EnergyGrid grid;
  TrotterConfig trotter;
  ThermoSpec thermo;
  RefineSpec refine;
  double merge_tol = 1e-9;
  bool scan_theory = true;
  bool scan_per_input = false;
  bool scan_clamp = false;
  std::size_t validate_cells = 20;
  std::uint64_t validate_samples = 10000;
  std::string output = "out";
  unsigned workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Parses `key = value` lines. '#' starts a comment, `[section]` prefixes the
/// following keys with "section.", values may be double-quoted. Unknown keys
/// are errors. A JSON run manifest is accepted as well (its "config" object).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Sets one dotted key from its textual value; throws ConfigError naming the key.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value,
                      int line = 0);

/// Applies RODEO_SEED from the environment when set.
void apply_environment(RunConfig& config);

/// Flat {key: value} map of every setting, in the same keys parse_config reads.
nlohmann::json config_to_json(const RunConfig& config);

const std::vector<std::string>& config_keys();

/// The Hamiltonian described by the config (TFIM or file).
Hamiltonian build_hamiltonian(const RunConfig& config);

}  // namespace rodeo
