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

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "rodeo/hamiltonian_io.hpp"
#include "rodeo/state_vector.hpp"

namespace rodeo {

nlohmann::json to_json(const Hamiltonian& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : h.terms()) terms.push_back({{"coeff", t.coefficient()}, {"paulis", t.letters()}});
  return {{"qubits", h.qubits()}, {"terms", std::move(terms)}};
}

Hamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  try {
    const auto qubits = j.at("qubits").get<std::size_t>();
    std::vector<PauliString> terms;
    for (const auto& t : j.at("terms")) terms.emplace_back(t.at("coeff").get<double>(), t.at("paulis").get<std::string>());
    return Hamiltonian(qubits, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed Hamiltonian JSON: ") + e.what());
  }
}

void write_hamiltonian(std::ostream& out, const Hamiltonian& h) { out << to_json(h).dump(2) << '\n'; }

Hamiltonian read_hamiltonian(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("Hamiltonian file is not JSON: ") + e.what());
  }
  return hamiltonian_from_json(j);
}

namespace {

constexpr std::array<char, 4> kMagic = {'R', 'D', 'S', 'V'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) throw IoError("truncated state vector dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_state_vector(std::ostream& out, const StateVector& sv) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sv.ancillas()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sv.system_qubits()));
  put_le<std::uint32_t>(out, kVersion);
  for (Index i = 0; i < sv.dimension(); ++i) {
    put_le<double>(out, sv[i].real());
    put_le<double>(out, sv[i].imag());
  }
  if (!out) throw IoError("failed to write state vector dump");
}

StateVector read_state_vector(std::istream& in) {
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw IoError("not a state vector dump (bad magic)");
  const auto n = get_le<std::uint32_t>(in);
  const auto m = get_le<std::uint32_t>(in);
  if (get_le<std::uint32_t>(in) != kVersion) throw IoError("unsupported state vector dump version");
  StateVector sv(n, m);
  for (Index i = 0; i < sv.dimension(); ++i) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    sv.amplitudes()[static_cast<Eigen::Index>(i)] = {re, im};
  }
  return sv;
}

}  // namespace rodeo
