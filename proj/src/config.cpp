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

#include "rodeo/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "rodeo/hamiltonian_io.hpp"

namespace rodeo {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct KeyError {
  std::string message;
};

double to_real(std::string_view v) {
  double x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw KeyError{"expected a real number, got '" + std::string(v) + "'"};
  return x;
}

std::uint64_t to_count(std::string_view v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw KeyError{"expected a nonnegative integer, got '" + std::string(v) + "'"};
  return x;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw KeyError{"expected true or false, got '" + std::string(v) + "'"};
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<nlohmann::json(const RunConfig&)> get;
};

template <typename T>
Key real_key(std::string name, T RunConfig::*outer, double T::*field) {
  return {std::move(name), [=](RunConfig& c, std::string_view v) { c.*outer.*field = to_real(v); },
          [=](const RunConfig& c) { return nlohmann::json(c.*outer.*field); }};
}

const std::vector<Key>& registry() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back({"model.spins",
                 [](RunConfig& c, std::string_view v) { c.model.spins = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.model.spins); }});
    k.push_back(real_key("model.J", &RunConfig::model, &TfimParams::exchange));
    k.push_back(real_key("model.B", &RunConfig::model, &TfimParams::field));
    k.push_back({"model.periodic",
                 [](RunConfig& c, std::string_view v) { c.model.periodic = to_bool(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.model.periodic); }});
    k.push_back({"model.hamiltonian",
                 [](RunConfig& c, std::string_view v) { c.hamiltonian_file = std::string(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.hamiltonian_file); }});

    k.push_back({"rodeo.ancillas",
                 [](RunConfig& c, std::string_view v) { c.rodeo.ancillas = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.rodeo.ancillas); }});
    k.push_back({"rodeo.rounds",
                 [](RunConfig& c, std::string_view v) { c.rodeo.rounds = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.rodeo.rounds); }});
    k.push_back(real_key("rodeo.tau", &RunConfig::rodeo, &RodeoParams::tau));
    k.push_back(real_key("rodeo.dev", &RunConfig::rodeo, &RodeoParams::dev));
    k.push_back({"rodeo.seed",
                 [](RunConfig& c, std::string_view v) { c.rodeo.seed = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.rodeo.seed); }});
    k.push_back({"rodeo.readout",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "expectation") c.rodeo.readout = Readout::kExpectation;
                   else if (v == "shots") c.rodeo.readout = Readout::kShots;
                   else throw KeyError{"expected expectation or shots, got '" + std::string(v) + "'"};
                 },
                 [](const RunConfig& c) {
                   return nlohmann::json(c.rodeo.readout == Readout::kShots ? "shots" : "expectation");
                 }});
    k.push_back({"rodeo.shots",
                 [](RunConfig& c, std::string_view v) { c.rodeo.shots = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.rodeo.shots); }});
    k.push_back({"rodeo.measurement",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "sequential") c.rodeo.measurement = Measurement::kSequential;
                   else if (v == "simultaneous") c.rodeo.measurement = Measurement::kSimultaneous;
                   else throw KeyError{"expected sequential or simultaneous, got '" + std::string(v) + "'"};
                 },
                 [](const RunConfig& c) {
                   return nlohmann::json(c.rodeo.measurement == Measurement::kSequential ? "sequential"
                                                                                          : "simultaneous");
                 }});

    k.push_back(real_key("grid.start", &RunConfig::grid, &EnergyGrid::start));
    k.push_back(real_key("grid.end", &RunConfig::grid, &EnergyGrid::end));
    k.push_back(real_key("grid.step", &RunConfig::grid, &EnergyGrid::step));

    k.push_back({"trotter.order",
                 [](RunConfig& c, std::string_view v) { c.trotter.order = static_cast<int>(to_count(v)); },
                 [](const RunConfig& c) { return nlohmann::json(c.trotter.order); }});
    k.push_back(real_key("trotter.delta", &RunConfig::trotter, &TrotterConfig::delta));
    k.push_back({"trotter.max_steps",
                 [](RunConfig& c, std::string_view v) { c.trotter.max_steps = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.trotter.max_steps); }});
    k.push_back({"trotter.mode",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "trotter") c.trotter.mode = EvolutionMode::kTrotter;
                   else if (v == "exact") c.trotter.mode = EvolutionMode::kExact;
                   else throw KeyError{"expected trotter or exact, got '" + std::string(v) + "'"};
                 },
                 [](const RunConfig& c) {
                   return nlohmann::json(c.trotter.mode == EvolutionMode::kExact ? "exact" : "trotter");
                 }});

    k.push_back(real_key("thermo.t_min", &RunConfig::thermo, &ThermoSpec::t_min));
    k.push_back(real_key("thermo.t_max", &RunConfig::thermo, &ThermoSpec::t_max));
    k.push_back({"thermo.points",
                 [](RunConfig& c, std::string_view v) { c.thermo.points = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.thermo.points); }});
    k.push_back(real_key("thermo.imag", &RunConfig::thermo, &ThermoSpec::imag));
    k.push_back({"thermo.clamp_negative",
                 [](RunConfig& c, std::string_view v) { c.thermo.clamp_negative = to_bool(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.thermo.clamp_negative); }});
    k.push_back({"thermo.input",
                 [](RunConfig& c, std::string_view v) { c.thermo.input = std::string(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.thermo.input); }});

    k.push_back({"refine.start",
                 [](RunConfig& c, std::string_view v) { c.refine.grid.start = to_real(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.refine.grid.start); }});
    k.push_back({"refine.end",
                 [](RunConfig& c, std::string_view v) { c.refine.grid.end = to_real(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.refine.grid.end); }});
    k.push_back({"refine.step",
                 [](RunConfig& c, std::string_view v) { c.refine.grid.step = to_real(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.refine.grid.step); }});
    k.push_back(real_key("refine.dev", &RunConfig::refine, &RefineSpec::dev));

    k.push_back({"exact.merge_tol",
                 [](RunConfig& c, std::string_view v) { c.merge_tol = to_real(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.merge_tol); }});
    k.push_back({"scan.theory",
                 [](RunConfig& c, std::string_view v) { c.scan_theory = to_bool(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.scan_theory); }});
    k.push_back({"scan.per_input",
                 [](RunConfig& c, std::string_view v) { c.scan_per_input = to_bool(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.scan_per_input); }});
    k.push_back({"scan.clamp",
                 [](RunConfig& c, std::string_view v) { c.scan_clamp = to_bool(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.scan_clamp); }});
    k.push_back({"validate.cells",
                 [](RunConfig& c, std::string_view v) { c.validate_cells = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.validate_cells); }});
    k.push_back({"validate.samples",
                 [](RunConfig& c, std::string_view v) { c.validate_samples = to_count(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.validate_samples); }});
    k.push_back({"output.dir",
                 [](RunConfig& c, std::string_view v) { c.output = std::string(v); },
                 [](const RunConfig& c) { return nlohmann::json(c.output); }});
    k.push_back({"workers",
                 [](RunConfig& c, std::string_view v) {
                   c.workers = static_cast<unsigned>(to_count(v));
                 },
                 [](const RunConfig& c) { return nlohmann::json(c.workers); }});
    return k;
  }();
  return keys;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

std::string json_scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return v.dump();
  throw ConfigError("config values must be scalars, got " + v.dump());
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : registry()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value, int line) {
  for (const auto& k : registry()) {
    if (k.name != key) continue;
    try {
      k.set(config, value);
    } catch (const KeyError& e) {
      throw ConfigError(std::string(key) + ": " + e.message, line);
    }
    return;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

void RunConfig::validate() const {
  require(model.spins >= 1, "model.spins", "must be at least 1");
  require(model.field >= 0, "model.B", "field must be nonnegative");
  require(rodeo.ancillas >= 1, "rodeo.ancillas", "must be at least 1");
  require(rodeo.ancillas <= 16, "rodeo.ancillas", "at most 16 ancillas are supported");
  require(rodeo.rounds >= 1, "rodeo.rounds", "must be at least 1");
  require(rodeo.dev > 0, "rodeo.dev", "dev must be positive");
  require(rodeo.readout != Readout::kShots || rodeo.shots >= 1, "rodeo.shots", "must be at least 1");
  require(grid.step > 0, "grid.step", "step must be positive");
  require(grid.end >= grid.start, "grid.end", "end must not be below grid.start");
  require(trotter.order == 1 || (trotter.order >= 2 && trotter.order % 2 == 0), "trotter.order",
          "order must be 1 or even");
  require(trotter.delta > 0, "trotter.delta", "delta must be positive");
  require(trotter.max_steps >= 1, "trotter.max_steps", "must be at least 1");
  require(thermo.t_min > 0, "thermo.t_min", "must be positive");
  require(thermo.t_max >= thermo.t_min, "thermo.t_max", "must not be below thermo.t_min");
  require(thermo.points >= 1, "thermo.points", "must be at least 1");
  require(refine.grid.step > 0, "refine.step", "step must be positive");
  require(refine.grid.end >= refine.grid.start, "refine.end", "end must not be below refine.start");
  require(refine.dev > 0, "refine.dev", "dev must be positive");
  require(merge_tol >= 0, "exact.merge_tol", "must be nonnegative");
  require(validate_cells >= 1, "validate.cells", "must be at least 1");
  require(validate_samples >= 2, "validate.samples", "must be at least 2");
  require(!output.empty(), "output.dir", "must not be empty");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    const auto& values = j.contains("config") ? j.at("config") : j;
    if (!values.is_object()) throw ConfigError("manifest 'config' must be an object");
    for (const auto& [key, value] : values.items()) set_config_value(config, key, json_scalar_text(value));
    config.validate();
    return config;
  }

  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s;
    bool quoted = false;
    for (char ch : raw) {
      if (ch == '"') quoted = !quoted;
      if (ch == '#' && !quoted) break;
      s += ch;
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    else if (value.empty())
      throw ConfigError("missing value for '" + key + "'", line);
    if (!section.empty()) key = section + "." + key;
    set_config_value(config, key, value, line);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_environment(RunConfig& config) {
  if (const char* seed = std::getenv("RODEO_SEED"); seed && *seed)
    set_config_value(config, "rodeo.seed", seed);
}

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& k : registry()) j[k.name] = k.get(config);
  return j;
}

Hamiltonian build_hamiltonian(const RunConfig& config) {
  if (config.hamiltonian_file.empty()) return build_tfim(config.model);
  std::ifstream in(config.hamiltonian_file);
  if (!in) throw IoError("cannot open Hamiltonian '" + config.hamiltonian_file + "'");
  return read_hamiltonian(in);
}

}  // namespace rodeo
