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

#include <nlohmann/json.hpp>

#include "rodeo/pauli.hpp"

namespace rodeo {

// {"qubits": M, "terms": [{"coeff": c, "paulis": "ZZIII"}, ...]}
nlohmann::json to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const nlohmann::json& j);

void write_hamiltonian(std::ostream& out, const Hamiltonian& h);
Hamiltonian read_hamiltonian(std::istream& in);

}  // namespace rodeo
