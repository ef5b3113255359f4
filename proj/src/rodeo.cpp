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

#include "rodeo/rodeo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "rodeo/csv.hpp"

namespace rodeo {

void RodeoParams::validate() const {
  if (ancillas < 1) throw InvalidArgument("ancillas must be at least 1");
  if (rounds < 1) throw InvalidArgument("rounds must be at least 1");
  if (!(dev > 0) || !std::isfinite(dev)) throw InvalidArgument("dev must be positive");
  if (!std::isfinite(tau)) throw InvalidArgument("tau must be finite");
  if (readout == Readout::kShots && shots < 1) throw InvalidArgument("shots must be at least 1");
}

void EnergyGrid::validate() const {
  if (!std::isfinite(start) || !std::isfinite(end)) throw InvalidArgument("grid bounds must be finite");
  if (!(step > 0) || !std::isfinite(step)) throw InvalidArgument("grid step must be positive");
  if (end < start) throw InvalidArgument("grid end must not be below grid start");
}

std::size_t EnergyGrid::size() const {
  validate();
  return static_cast<std::size_t>(std::floor((end - start) / step + 0.5)) + 1;
}

std::vector<double> EnergyGrid::energies() const {
  std::vector<double> e(size());
  for (std::size_t l = 0; l < e.size(); ++l) e[l] = energy(l);
  return e;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

CellRng cell_stream(std::uint64_t master_seed, std::uint64_t n, std::uint64_t l) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ (l * 0xD1B54A32D192ED03ull));
  return CellRng(h);
}

std::vector<double> sample_times(const RodeoParams& params, std::size_t count, CellRng& rng) {
  std::normal_distribution<double> dist(params.tau, params.dev);
  std::vector<double> t(count);
  for (auto& x : t) x = dist(rng);
  return t;
}

namespace {

// Leaves `sv` in the final state of one rodeo round.
StepCount run_round(StateVector& sv, const Propagator& propagator, Index n, double energy,
                    std::span<const double> times, std::uint64_t& capped) {
  const std::size_t N = times.size();
  const std::size_t M = propagator.hamiltonian().qubits();
  sv.set_basis_state((((Index{1} << N) - 1) << M) | n);
  for (std::size_t k = 0; k < N; ++k) apply_hadamard(sv, k);
  StepCount last;
  for (std::size_t k = 0; k < N; ++k) {
    last = propagator.apply_controlled(sv, k, times[k]);
    if (last.capped) ++capped;
    apply_phase_shift(sv, k, energy * times[k]);
  }
  for (std::size_t k = 0; k < N; ++k) apply_hadamard(sv, k);
  return last;
}

// (-1)^{N+1} <Z...Z> so that a perfect match scores -1 for every N.
double product_sign(std::size_t ancillas) { return ancillas % 2 == 1 ? 1.0 : -1.0; }

std::vector<std::size_t> ancilla_indices(std::size_t ancillas) {
  std::vector<std::size_t> a(ancillas);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return a;
}

void check_basis_input(const Propagator& propagator, Index n) {
  if (n >= propagator.hamiltonian().dimension())
    throw InvalidArgument("basis input " + std::to_string(n) + " out of range for " +
                          std::to_string(propagator.hamiltonian().qubits()) + " system qubits");
}

}  // namespace

double round_score(const Propagator& propagator, Index n, double energy,
                   std::span<const double> times, Measurement measurement) {
  if (times.empty()) throw InvalidArgument("a round needs at least one ancilla time");
  check_basis_input(propagator, n);
  const std::size_t N = times.size();
  StateVector sv(N, propagator.hamiltonian().qubits());
  std::uint64_t capped = 0;
  run_round(sv, propagator, n, energy, times, capped);
  if (measurement == Measurement::kSimultaneous)
    return product_sign(N) * expect_z_product<double>(sv, ancilla_indices(N));
  double sum = 0;
  for (std::size_t k = 0; k < N; ++k) sum += expect_z(sv, k);
  return sum / static_cast<double>(N);
}

ScoreAverage score_average(const Propagator& propagator, Index n, double energy,
                           const RodeoParams& params, CellRng& rng) {
  params.validate();
  check_basis_input(propagator, n);
  const std::size_t N = params.ancillas;
  StateVector sv(N, propagator.hamiltonian().qubits());
  std::normal_distribution<double> time_dist(params.tau, params.dev);
  std::vector<double> times(N);
  const auto ancillas = ancilla_indices(N);

  ScoreAverage out;
  double sum = 0;
  double sum_sq = 0;
  auto record = [&](double h) {
    sum += h;
    sum_sq += h * h;
    ++out.samples;
  };

  for (std::uint64_t round = 0; round < params.rounds; ++round) {
    for (auto& t : times) t = time_dist(rng);
    run_round(sv, propagator, n, energy, times, out.capped);
    out.evolutions += N;
    if (params.measurement == Measurement::kSequential) {
      for (std::size_t k = 0; k < N; ++k) {
        record(params.readout == Readout::kShots ? sample_z(sv, k, params.shots, rng)
                                                 : expect_z(sv, k));
      }
    } else {
      double z = expect_z_product<double>(sv, ancillas);
      if (params.readout == Readout::kShots) z = sample_pm1(z, params.shots, rng);
      record(product_sign(N) * z);
    }
  }

  const double count = static_cast<double>(out.samples);
  out.mean = std::clamp(sum / count, -1.0, 1.0);
  const double var = std::max(0.0, sum_sq / count - (sum / count) * (sum / count));
  out.std_error = std::sqrt(var / count);
  return out;
}

ScoreAverage score_average(const Hamiltonian& h, Index n, double energy, const RodeoParams& params,
                           const TrotterConfig& trotter) {
  const Propagator propagator(h, trotter);
  auto rng = cell_stream(params.seed, n, 0);
  return score_average(propagator, n, energy, params, rng);
}

namespace {

void check_input(const Spectrum& spectrum, Index n) {
  if (!spectrum.has_overlaps()) throw InvalidArgument("spectrum carries no eigenvector overlaps");
  if (n >= (Index{1} << spectrum.qubits))
    throw InvalidArgument("basis input " + std::to_string(n) + " out of range");
}

}  // namespace

double closed_form_score(const Spectrum& spectrum, Index n, double energy,
                         std::span<const double> times, Measurement measurement) {
  check_input(spectrum, n);
  if (times.empty()) throw InvalidArgument("closed_form_score needs at least one time");
  const auto& c2 = *spectrum.overlaps;
  const auto col = static_cast<Eigen::Index>(n);
  double total = 0;
  for (std::size_t x = 0; x < spectrum.eigenvalues.size(); ++x) {
    const double w = c2(static_cast<Eigen::Index>(x), col);
    const double a = energy - spectrum.eigenvalues[x];
    if (measurement == Measurement::kSequential) {
      double s = 0;
      for (double t : times) s += std::cos(a * t);
      total += w * s / static_cast<double>(times.size());
    } else {
      double p = 1;
      for (double t : times) p *= std::cos(a * t);
      total += w * p;
    }
  }
  return -total;
}

namespace {

double gaussian_factor(double a, const RodeoParams& params) {
  if (params.measurement == Measurement::kSequential)
    return std::exp(-params.dev * params.dev * a * a / 2) * std::cos(a * params.tau);
  const double n = static_cast<double>(params.ancillas);
  return std::exp(-n * params.dev * params.dev * a * a / 2) *
         std::pow(std::cos(a * params.tau), n);
}

}  // namespace

double theory_score(const Spectrum& spectrum, Index n, double energy, const RodeoParams& params) {
  check_input(spectrum, n);
  const auto& c2 = *spectrum.overlaps;
  double total = 0;
  for (std::size_t x = 0; x < spectrum.eigenvalues.size(); ++x)
    total += c2(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(n)) *
             gaussian_factor(energy - spectrum.eigenvalues[x], params);
  return -total;
}

double theory_omega(std::span<const double> eigenvalues, double energy, const RodeoParams& params) {
  double total = 0;
  for (double e : eigenvalues) total += gaussian_factor(energy - e, params);
  return total;
}

NosEstimate nos_scan(const Propagator& propagator, const EnergyGrid& grid, const RodeoParams& params,
                     const ScanOptions& options) {
  params.validate();
  const std::size_t rows = grid.size();
  const std::size_t inputs = static_cast<std::size_t>(propagator.hamiltonian().dimension());

  std::vector<ScoreAverage> cells(rows * inputs);
  std::atomic<std::size_t> next_row{0};
  std::atomic<std::size_t> done_rows{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      for (std::size_t l = next_row++; l < rows; l = next_row++) {
        const double energy = grid.energy(l);
        for (std::size_t n = 0; n < inputs; ++n) {
          auto rng = cell_stream(params.seed, n, l);
          cells[l * inputs + n] = score_average(propagator, n, energy, params, rng);
        }
        const auto done = ++done_rows;
        if (options.progress) options.progress(done, rows);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_row = rows;
    }
  };

  unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  // Fixed-order reduction: independent of worker count and schedule.
  NosEstimate est;
  est.grid = grid;
  est.inputs = inputs;
  est.omega.assign(rows, 0.0);
  est.std_error.assign(rows, 0.0);
  for (std::size_t l = 0; l < rows; ++l) {
    double omega = 0;
    double var = 0;
    for (std::size_t n = 0; n < inputs; ++n) {
      const auto& c = cells[l * inputs + n];
      omega -= c.mean;
      var += c.std_error * c.std_error;
      est.evolutions += c.evolutions;
      est.capped += c.capped;
    }
    est.omega[l] = omega;
    est.std_error[l] = std::sqrt(var);
  }
  if (options.theory_eigenvalues) {
    est.theory.resize(rows);
    for (std::size_t l = 0; l < rows; ++l)
      est.theory[l] = theory_omega(*options.theory_eigenvalues, grid.energy(l), params);
  }
  if (options.keep_per_input) est.per_input = std::move(cells);
  return est;
}

std::vector<double> clamp_nonnegative(std::span<const double> omega) {
  std::vector<double> out(omega.begin(), omega.end());
  for (auto& w : out) w = std::max(w, 0.0);
  return out;
}

std::vector<std::size_t> significant_peaks(std::span<const double> omega,
                                           std::span<const double> std_error, double sigmas,
                                           double floor) {
  if (omega.size() != std_error.size()) throw InvalidArgument("omega and std_error differ in length");
  std::vector<double> y(omega.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double bar = std::max(floor, sigmas * std_error[i]);
    y[i] = omega[i] > bar ? omega[i] : 0.0;
  }
  std::vector<std::size_t> peaks;
  std::size_t i = 0;
  while (i < y.size()) {
    if (y[i] <= 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < y.size() && y[j + 1] == y[i]) ++j;  // flat top
    const bool left = i == 0 || y[i - 1] < y[i];
    const bool right = j + 1 == y.size() || y[j + 1] < y[i];
    if (left && right) peaks.push_back((i + j) / 2);
    i = j + 1;
  }
  return peaks;
}

void write_scan_csv(std::ostream& out, const NosEstimate& est) {
  out << "energy,omega,stderr,theory\n";
  for (std::size_t l = 0; l < est.omega.size(); ++l) {
    out << csv::energy(est.grid.energy(l)) << ',' << csv::number(est.omega[l]) << ','
        << csv::number(est.std_error[l]) << ',';
    if (!est.theory.empty()) out << csv::number(est.theory[l]);
    out << '\n';
  }
}

void write_per_input_csv(std::ostream& out, const NosEstimate& est) {
  if (est.per_input.empty()) throw InvalidArgument("scan did not keep per-input scores");
  out << "energy,n,sa,stderr\n";
  for (std::size_t l = 0; l < est.omega.size(); ++l) {
    for (std::size_t n = 0; n < est.inputs; ++n) {
      const auto& c = est.per_input[l * est.inputs + n];
      out << csv::energy(est.grid.energy(l)) << ',' << n << ',' << csv::number(c.mean) << ','
          << csv::number(c.std_error) << '\n';
    }
  }
}

std::vector<ScanRow> read_scan_csv(std::istream& in) {
  const auto table = csv::read(in);
  const auto ie = table.column("energy");
  const auto io = table.column("omega");
  const auto is = table.column("stderr");
  std::vector<ScanRow> rows;
  rows.reserve(table.rows.size());
  int line = 1;
  for (const auto& r : table.rows) {
    ++line;
    rows.push_back({csv::to_double(r[ie], line), csv::to_double(r[io], line),
                    csv::to_double(r[is], line)});
  }
  return rows;
}

}  // namespace rodeo
