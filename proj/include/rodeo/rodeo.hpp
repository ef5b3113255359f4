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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rodeo/evolution.hpp"
#include "rodeo/pauli.hpp"
#include "rodeo/spectrum.hpp"

namespace rodeo {

enum class Readout { kExpectation, kShots };

// Sequential: each ancilla's <Z> is a separate sample. Simultaneous: one
// sample per round from the N-fold product observable.
enum class Measurement { kSequential, kSimultaneous };

struct RodeoParams {
  std::size_t ancillas = 1;      // N
  std::uint64_t rounds = 500;    // N_rounds
  double tau = 0;                // mean of the time distribution
  double dev = 20;               // standard deviation d of the time distribution
  std::uint64_t seed = 42;
  Readout readout = Readout::kExpectation;
  std::uint64_t shots = 1000;    // used only with Readout::kShots
  Measurement measurement = Measurement::kSequential;

  void validate() const;
};

/// E_l = start + l * step for l = 0..size()-1; the last point is the largest
/// E_l <= end + step/2.
struct EnergyGrid {
  double start = -6;
  double end = 5;
  double step = 0.1;

  void validate() const;
  std::size_t size() const;
  double energy(std::size_t l) const { return start + static_cast<double>(l) * step; }
  std::vector<double> energies() const;
};

struct ScoreAverage {
  double mean = 0;     // h-bar, in [-1, 1]
  double std_error = 0;  // s = sqrt(Var / samples)
  std::uint64_t samples = 0;
  std::uint64_t evolutions = 0;
  std::uint64_t capped = 0;  // evolutions whose Trotter r hit max_steps
};

using CellRng = std::mt19937_64;

/// Independent stream for scan cell (input n, gridpoint l). Depends only on
/// its arguments, so any schedule or subset of cells reproduces it.
CellRng cell_stream(std::uint64_t master_seed, std::uint64_t n, std::uint64_t l);

/// i.i.d. draws from Normal(tau, dev^2).
std::vector<double> sample_times(const RodeoParams& params, std::size_t count, CellRng& rng);

/// Score of a single round with the given ancilla times and exact readout:
/// rider state, Hadamards, controlled evolution and P(E t_k) per ancilla,
/// Hadamards, then <Z> averaged over ancillas (sequential) or the signed
/// product observable (simultaneous).
double round_score(const Propagator& propagator, Index n, double energy,
                   std::span<const double> times, Measurement measurement = Measurement::kSequential);

/// Runs `rounds` rodeo cycles on basis input n with energy guess E.
ScoreAverage score_average(const Propagator& propagator, Index n, double energy,
                           const RodeoParams& params, CellRng& rng);

/// Convenience form: builds the propagator and uses the stream of cell (n, 0).
ScoreAverage score_average(const Hamiltonian& h, Index n, double energy, const RodeoParams& params,
                           const TrotterConfig& trotter);

/// Score of one round for fixed ancilla times with exact evolution:
/// sequential -(1/N) sum_k sum_x c_{x,n}^2 cos((E - E_x) t_k),
/// simultaneous -sum_x c_{x,n}^2 prod_k cos((E - E_x) t_k).
double closed_form_score(const Spectrum& spectrum, Index n, double energy,
                         std::span<const double> times,
                         Measurement measurement = Measurement::kSequential);

/// Gaussian-averaged score of input n:
/// -sum_x c_{x,n}^2 exp(-d^2 a^2 / 2) cos(a tau), a = E - E_x (sequential), or
/// -sum_x c_{x,n}^2 exp(-N d^2 a^2 / 2) cos^N(a tau) (simultaneous).
double theory_score(const Spectrum& spectrum, Index n, double energy, const RodeoParams& params);

/// Basis-summed theory, sum_n -theory_score = sum_x exp(-d^2 a^2/2) cos(a tau).
/// Needs only eigenvalues.
double theory_omega(std::span<const double> eigenvalues, double energy, const RodeoParams& params);

struct NosEstimate {
  EnergyGrid grid;
  std::vector<double> omega;    // sum_n -h-bar(E_l, n)
  std::vector<double> std_error;  // per-input s combined in quadrature
  std::vector<double> theory;   // empty unless an oracle spectrum was supplied
  // Row-major [l * 2^M + n] when requested.
  std::vector<ScoreAverage> per_input;
  std::size_t inputs = 0;
  std::uint64_t evolutions = 0;
  std::uint64_t capped = 0;
};

struct ScanOptions {
  unsigned workers = 1;  // 0 = hardware concurrency
  const std::vector<double>* theory_eigenvalues = nullptr;
  bool keep_per_input = false;
  // Called from worker threads after each finished gridpoint row.
  std::function<void(std::size_t done_rows, std::size_t total_rows)> progress;
};

/// Estimates Omega(E_l) = sum over all basis inputs of -h-bar(E_l, n).
NosEstimate nos_scan(const Propagator& propagator, const EnergyGrid& grid, const RodeoParams& params,
                     const ScanOptions& options = {});

/// Replaces negative weights by zero (statistical noise); returns a copy.
std::vector<double> clamp_nonnegative(std::span<const double> omega);

/// Indices of local maxima after zeroing every point not above
/// `sigmas * std_error` (and `floor`). Flat tops count once, at their centre.
std::vector<std::size_t> significant_peaks(std::span<const double> omega,
                                           std::span<const double> std_error, double sigmas,
                                           double floor = 0);

// CSV: energy,omega,stderr,theory (theory empty when not computed).
void write_scan_csv(std::ostream& out, const NosEstimate& est);
// CSV: energy,n,sa,stderr
void write_per_input_csv(std::ostream& out, const NosEstimate& est);

struct ScanRow {
  double energy;
  double omega;
  double std_error;
};
std::vector<ScanRow> read_scan_csv(std::istream& in);

}  // namespace rodeo
