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

#include "rodeo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rodeo/csv.hpp"

namespace rodeo {

void NosTable::validate() const {
  if (entries.empty()) throw InvalidArgument("NoS table is empty");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i].energy) || !std::isfinite(entries[i].weight))
      throw InvalidArgument("NoS table entries must be finite");
    if (i > 0 && !(entries[i].energy > entries[i - 1].energy))
      throw InvalidArgument("NoS table energies must be strictly increasing");
  }
}

double NosTable::total_weight() const {
  double s = 0;
  for (const auto& e : entries) s += e.weight;
  return s;
}

double NosTable::min_energy() const {
  validate();
  return entries.front().energy;
}

NosTable NosTable::from_levels(std::span<const Level> levels) {
  NosTable t;
  t.source = NosSource::kExact;
  for (const auto& l : levels) t.entries.push_back({l.energy, static_cast<double>(l.multiplicity)});
  t.validate();
  return t;
}

NosTable NosTable::from_scan(std::span<const ScanRow> rows, bool clamp) {
  NosTable t;
  t.source = NosSource::kRodeo;
  for (const auto& r : rows) t.entries.push_back({r.energy, clamp ? std::max(r.omega, 0.0) : r.omega});
  t.validate();
  return t;
}

NosTable NosTable::from_estimate(const NosEstimate& est, bool clamp) {
  std::vector<ScanRow> rows;
  for (std::size_t l = 0; l < est.omega.size(); ++l)
    rows.push_back({est.grid.energy(l), est.omega[l], est.std_error[l]});
  return from_scan(rows, clamp);
}

namespace {

// Shifted Boltzmann sum S = sum_l w_l e^{-B (E_l - E_min)} and its scale
// sum_l |w_l| e^{-beta (E_l - E_min)} for the cancellation test.
struct ShiftedSum {
  std::complex<double> sum;
  double scale;
  double e_min;
};

ShiftedSum shifted_sum(const NosTable& table, double beta, double b) {
  table.validate();
  const double e_min = table.entries.front().energy;
  ShiftedSum s{{0, 0}, 0, e_min};
  for (const auto& e : table.entries) {
    const double de = e.energy - e_min;
    const double mag = std::exp(-beta * de);
    s.sum += e.weight * std::polar(mag, -b * de);
    s.scale += std::abs(e.weight) * mag;
  }
  return s;
}

double wrap_phase(double phase) {
  const double two_pi = 2 * std::numbers::pi;
  double p = std::remainder(phase, two_pi);  // [-pi, pi]
  if (p <= -std::numbers::pi) p += two_pi;
  return p;
}

}  // namespace

std::complex<double> log_partition_function(const NosTable& table, double beta, double b) {
  const auto s = shifted_sum(table, beta, b);
  if (s.scale == 0 || std::abs(s.sum) <= 1e-14 * s.scale)
    throw PartitionZero("partition function vanishes at B = " + std::to_string(beta) + " + " +
                        std::to_string(b) + "i");
  const double re = -beta * s.e_min + std::log(std::abs(s.sum));
  const double im = wrap_phase(-b * s.e_min + std::arg(s.sum));
  return {re, im};
}

std::complex<double> partition_function(const NosTable& table, double beta, double b) {
  const auto s = shifted_sum(table, beta, b);
  return std::polar(std::exp(-beta * s.e_min), -b * s.e_min) * s.sum;
}

std::complex<double> free_energy(std::complex<double> z, std::complex<double> inverse_temperature) {
  if (z == std::complex<double>(0, 0)) throw PartitionZero("free energy undefined: Z = 0");
  return free_energy_from_log(std::log(z), inverse_temperature);
}

std::complex<double> free_energy_from_log(std::complex<double> log_z,
                                          std::complex<double> inverse_temperature) {
  if (inverse_temperature == std::complex<double>(0, 0))
    throw InvalidArgument("free energy undefined at zero inverse temperature");
  return -log_z / inverse_temperature;
}

double entropy(const NosTable& table, double level, double tol) {
  table.validate();
  for (const auto& e : table.entries) {
    if (std::abs(e.energy - level) > tol) continue;
    if (!(e.weight > 0))
      throw InvalidArgument("entropy needs a positive number of states at E = " +
                            std::to_string(level));
    return std::log(e.weight);
  }
  throw InvalidArgument("no NoS entry at E = " + std::to_string(level));
}

namespace {

double energy_variance(const NosTable& table, double beta) {
  const double e_min = table.entries.front().energy;
  double z = 0;
  double mean = 0;
  for (const auto& e : table.entries) {
    const double w = e.weight * std::exp(-beta * (e.energy - e_min));
    z += w;
    mean += w * e.energy;
  }
  if (!(z > 0)) throw PartitionZero("canonical weights sum to zero");
  mean /= z;
  double var = 0;
  for (const auto& e : table.entries) {
    const double d = e.energy - mean;
    var += e.weight * std::exp(-beta * (e.energy - e_min)) * d * d;
  }
  return var / z;
}

}  // namespace

std::vector<double> specific_heat(const NosTable& table, std::span<const double> betas,
                                  std::size_t spins) {
  table.validate();
  if (betas.empty()) throw InvalidArgument("beta grid is empty");
  if (spins == 0) throw InvalidArgument("spin count must be positive");
  std::vector<double> c;
  c.reserve(betas.size());
  for (double beta : betas) {
    if (!(beta > 0)) throw InvalidArgument("specific heat needs beta > 0");
    c.push_back(beta * beta * energy_variance(table, beta) / static_cast<double>(spins));
  }
  return c;
}

std::vector<double> specific_heat_finite_difference(const NosTable& table,
                                                    std::span<const double> betas,
                                                    std::size_t spins, FiniteDifferenceForm form,
                                                    double relative_step) {
  table.validate();
  if (betas.empty()) throw InvalidArgument("beta grid is empty");
  if (spins == 0) throw InvalidArgument("spin count must be positive");
  if (!(relative_step > 0 && relative_step < 1)) throw InvalidArgument("relative step must be in (0, 1)");
  auto log_z = [&](double beta) { return log_partition_function(table, beta).real(); };
  const double m = static_cast<double>(spins);
  std::vector<double> c;
  c.reserve(betas.size());
  for (double beta : betas) {
    if (!(beta > 0)) throw InvalidArgument("specific heat needs beta > 0");
    const double h = relative_step * beta;
    if (form == FiniteDifferenceForm::kFreeEnergy) {
      auto f = [&](double x) { return -log_z(x) / x; };
      c.push_back((f(beta + h) - 2 * f(beta) + f(beta - h)) / (h * h) / m);
    } else {
      // beta F = -ln Z
      auto g = [&](double x) { return -log_z(x); };
      c.push_back(-beta * beta * (g(beta + h) - 2 * g(beta) + g(beta - h)) / (h * h) / m);
    }
  }
  return c;
}

std::vector<std::optional<double>> relative_difference(std::span<const double> a,
                                                       std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("curves differ in length");
  std::vector<std::optional<double>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] != 0) out[i] = std::abs(1 - a[i] / b[i]);
  return out;
}

std::vector<double> log_spaced_betas(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0) || !(t_max >= t_min)) throw InvalidArgument("temperature range must be positive");
  if (points == 0) throw InvalidArgument("beta grid needs at least one point");
  std::vector<double> betas(points);
  const double lo = std::log(t_min);
  const double hi = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    betas[i] = 1.0 / std::exp(lo + f * (hi - lo));
  }
  return betas;
}

std::vector<ThermoPoint> thermo_curve(const NosTable& table, std::span<const double> betas,
                                      std::size_t spins, double b) {
  const auto c = specific_heat(table, betas, spins);
  std::vector<ThermoPoint> out;
  out.reserve(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double beta = betas[i];
    const auto log_z = log_partition_function(table, beta, b);
    out.push_back({beta, std::exp(log_z), free_energy_from_log(log_z, {beta, b}), c[i]});
  }
  return out;
}

void write_thermo_csv(std::ostream& out, std::span<const ThermoPoint> curve) {
  out << "beta,T,Z_real,Z_imag,F_real,cB\n";
  for (const auto& p : curve) {
    out << csv::number(p.beta) << ',' << csv::number(1.0 / p.beta) << ',' << csv::number(p.z.real())
        << ',' << csv::number(p.z.imag()) << ',' << csv::number(p.f.real()) << ','
        << csv::number(p.c) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, std::span<const double> betas,
                          std::span<const double> rodeo, std::span<const double> exact) {
  const auto rel = relative_difference(rodeo, exact);
  if (betas.size() != rel.size()) throw InvalidArgument("beta grid does not match the curves");
  out << "beta,cB_rodeo,cB_exact,rel_diff\n";
  for (std::size_t i = 0; i < betas.size(); ++i) {
    out << csv::number(betas[i]) << ',' << csv::number(rodeo[i]) << ',' << csv::number(exact[i])
        << ',';
    if (rel[i]) out << csv::number(*rel[i]);
    out << '\n';
  }
}

void write_levels_csv(std::ostream& out, std::span<const Level> levels) {
  out << "energy,multiplicity\n";
  for (const auto& l : levels) out << csv::energy(l.energy) << ',' << l.multiplicity << '\n';
}

std::vector<Level> read_levels_csv(std::istream& in) {
  const auto table = csv::read(in);
  const auto ie = table.column("energy");
  const auto im = table.column("multiplicity");
  std::vector<Level> levels;
  int line = 1;
  for (const auto& r : table.rows) {
    ++line;
    const double m = csv::to_double(r[im], line);
    if (!(m >= 0) || m != std::floor(m))
      throw IoError("line " + std::to_string(line) + ": multiplicity must be a nonnegative integer");
    levels.push_back({csv::to_double(r[ie], line), static_cast<std::size_t>(m)});
  }
  return levels;
}

}  // namespace rodeo
