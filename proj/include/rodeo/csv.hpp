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

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "rodeo/error.hpp"

namespace rodeo::csv {

// Shortest representation that parses back to the same double.
inline std::string number(double x) { return fmt::format("{}", x); }

// Grid energies accumulate float noise (e.g. -4.999999999999999); 12
// significant digits print them as intended.
inline std::string energy(double x) {
  const std::string s = fmt::format("{:.12g}", x);
  return s == "-0" ? "0" : s;
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    out.emplace_back(line.substr(begin, comma - begin));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

inline double to_double(const std::string& field, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line_no) + ": not a number: '" + field + "'");
  }
}

/// Reads a CSV with a mandatory header; rows are returned as strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw IoError("CSV is missing column '" + std::string(name) + "'");
  }
};

inline Table read(std::istream& in) {
  Table t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(t.header.size()) + " fields");
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw IoError("CSV is empty");
  return t;
}

}  // namespace rodeo::csv
