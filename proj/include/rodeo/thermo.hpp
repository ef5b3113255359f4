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

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rodeo/rodeo.hpp"
#include "rodeo/spectrum.hpp"

namespace rodeo {

enum class NosSource { kRodeo, kExact };

struct NosEntry {
  double energy;
  double weight;  // Omega(E)
};

/// Number-of-states table: strictly increasing energies, finite weights.
struct NosTable {
  std::vector<NosEntry> entries;
  NosSource source = NosSource::kExact;

  void validate() const;
  double total_weight() const;
  double min_energy() const;

  static NosTable from_levels(std::span<const Level> levels);
  // Scan rows become entries; negative weights are zeroed when `clamp` is set.
  static NosTable from_scan(std::span<const ScanRow> rows, bool clamp = true);
  static NosTable from_estimate(const NosEstimate& est, bool clamp = true);
};

/// ln Z(beta + i b) on the principal branch, with e^{-B E_min} factored out of
/// the Boltzmann sum so large beta does not overflow.
std::complex<double> log_partition_function(const NosTable& table, double beta, double b = 0);

/// Z(beta + i b) = sum_l Omega(E_l) e^{-(beta + i b) E_l}. No energy-step
/// weighting: table weights are counts, not densities.
std::complex<double> partition_function(const NosTable& table, double beta, double b = 0);

/// F = -(1/B) ln Z on the principal branch. Throws PartitionZero for Z = 0.
std::complex<double> free_energy(std::complex<double> z, std::complex<double> inverse_temperature);

/// Same as free_energy but from ln Z, usable where Z itself overflows.
std::complex<double> free_energy_from_log(std::complex<double> log_z,
                                          std::complex<double> inverse_temperature);

/// S = ln Omega at the entry whose energy is within `tol` of `level` (k_B = 1).
double entropy(const NosTable& table, double level, double tol = 1e-9);

/// Per-spin specific heat c = beta^2 (<E^2> - <E>^2) / M.
std::vector<double> specific_heat(const NosTable& table, std::span<const double> betas,
                                  std::size_t spins);

enum class FiniteDifferenceForm {
  kFreeEnergy,         // (1/M) d^2 F / d beta^2, F = -ln Z / beta
  kReducedFreeEnergy,  // -(beta^2 / M) d^2 (beta F) / d beta^2
};

/// Central second differences with step `relative_step * beta`.
std::vector<double> specific_heat_finite_difference(const NosTable& table,
                                                    std::span<const double> betas,
                                                    std::size_t spins, FiniteDifferenceForm form,
                                                    double relative_step = 1e-3);

/// |1 - a/b| pointwise; empty where b is zero.
std::vector<std::optional<double>> relative_difference(std::span<const double> a,
                                                       std::span<const double> b);

/// Inverse temperatures for `points` log-spaced temperatures in [t_min, t_max],
/// ordered by increasing temperature.
std::vector<double> log_spaced_betas(double t_min = 0.05, double t_max = 10, std::size_t points = 200);

struct ThermoPoint {
  double beta;
  std::complex<double> z;
  std::complex<double> f;
  double c;
};

std::vector<ThermoPoint> thermo_curve(const NosTable& table, std::span<const double> betas,
                                      std::size_t spins, double b = 0);

// beta,T,Z_real,Z_imag,F_real,cB
void write_thermo_csv(std::ostream& out, std::span<const ThermoPoint> curve);
// beta,cB_rodeo,cB_exact,rel_diff
void write_comparison_csv(std::ostream& out, std::span<const double> betas,
                          std::span<const double> rodeo, std::span<const double> exact);

// energy,multiplicity
void write_levels_csv(std::ostream& out, std::span<const Level> levels);
std::vector<Level> read_levels_csv(std::istream& in);

}  // namespace rodeo
