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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rodeo/commands.hpp"
#include "rodeo/config.hpp"
#include "rodeo/csv.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Number-of-states estimation with the rodeo algorithm"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<double> e0, ef, eps, dev;

  for (const char* name : {"exact", "scan", "refine", "thermo", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Config file (key = value) or run manifest")->required();
    sub->add_option("--seed", seed, "Master seed (overrides RODEO_SEED and the file)");
    sub->add_option("--workers", workers, "Worker threads, 0 = all cores");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--e0", e0, "Grid start");
    sub->add_option("--ef", ef, "Grid end");
    sub->add_option("--eps", eps, "Grid step");
    sub->add_option("--dev", dev, "Standard deviation of the time distribution");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlohmann::json{{"error", "config"}, {"message", e.what()}}.dump() << '\n';
    return rodeo::kExitConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    rodeo::RunConfig config = rodeo::load_config(config_path);
    rodeo::apply_environment(config);
    // Flags win over the environment and the file.
    if (seed) config.rodeo.seed = *seed;
    if (workers) config.workers = *workers;
    if (out) config.output = *out;
    const std::string prefix = command == "refine" ? "refine." : "grid.";
    if (e0) rodeo::set_config_value(config, prefix + "start", rodeo::csv::number(*e0));
    if (ef) rodeo::set_config_value(config, prefix + "end", rodeo::csv::number(*ef));
    if (eps) rodeo::set_config_value(config, prefix + "step", rodeo::csv::number(*eps));
    if (dev) rodeo::set_config_value(config, command == "refine" ? "refine.dev" : "rodeo.dev",
                                     rodeo::csv::number(*dev));
    config.validate();

    const auto result = rodeo::run_subcommand(command, config, std::cerr);
    for (const auto& a : result.artifacts) std::cout << a << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << rodeo::error_report(e).dump() << '\n';
    return rodeo::exit_code_for(e);
  }
}
