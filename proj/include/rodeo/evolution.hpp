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

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rodeo/error.hpp"
#include "rodeo/pauli.hpp"
#include "rodeo/spectrum.hpp"
#include "rodeo/state_vector.hpp"

namespace rodeo {

enum class EvolutionMode { kTrotter, kExact };

struct TrotterConfig {
  int order = 1;                     // m: 1 or even
  double delta = 0.1;                // total-evolution precision target
  std::uint64_t max_steps = 5000;    // hard cap on r
  EvolutionMode mode = EvolutionMode::kTrotter;

  void validate() const {
    if (!(order == 1 || (order >= 2 && order % 2 == 0)))
      throw InvalidArgument("trotter order must be 1 or even, got " + std::to_string(order));
    if (!(delta > 0) || !std::isfinite(delta)) throw InvalidArgument("trotter delta must be positive");
    if (max_steps < 1) throw InvalidArgument("trotter max_steps must be at least 1");
  }
};

/// Suzuki coefficient p_m = 1 / (4 - 4^{1/(m-1)}) for even m >= 4.
template <typename Real = double>
Real suzuki_p(int order) {
  if (order < 4 || order % 2 != 0)
    throw InvalidArgument("suzuki_p needs an even order >= 4, got " + std::to_string(order));
  return Real(1) / (Real(4) - std::pow(Real(4), Real(1) / Real(order - 1)));
}

struct StepCount {
  std::uint64_t steps = 1;
  bool capped = false;
};

/// r = max(1, ceil(|t|^{1+1/m} / delta^{1/m})), clamped to max_steps.
inline StepCount trotter_step_count(double t, const TrotterConfig& config) {
  config.validate();
  const double m = config.order;
  const double raw = std::pow(std::abs(t), 1.0 + 1.0 / m) / std::pow(config.delta, 1.0 / m);
  // Shave relative float noise so exact quotients like 1/0.1 do not round up.
  const double want = std::ceil(raw * (1.0 - 1e-12));
  StepCount c;
  if (!(want <= static_cast<double>(config.max_steps))) {
    c.steps = config.max_steps;
    c.capped = true;
  } else {
    c.steps = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(want));
  }
  return c;
}

namespace detail {

template <typename Real>
void append_first_order(std::vector<GateRecord<Real>>& out, const BasicHamiltonian<Real>& h,
                        Real dt) {
  // S_1(dt) = e^{-i H_1 dt} ... e^{-i H_G dt}; the rightmost factor acts first.
  const auto& terms = h.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it)
    out.push_back(PauliExponential<Real>{*it, it->coefficient() * dt});
}

template <typename Real>
void append_suzuki(std::vector<GateRecord<Real>>& out, const BasicHamiltonian<Real>& h, Real dt,
                   int order) {
  if (order == 1) {
    append_first_order(out, h, dt);
    return;
  }
  if (order == 2) {
    const auto& terms = h.terms();
    for (const auto& t : terms) out.push_back(PauliExponential<Real>{t, t.coefficient() * dt / 2});
    for (auto it = terms.rbegin(); it != terms.rend(); ++it)
      out.push_back(PauliExponential<Real>{*it, it->coefficient() * dt / 2});
    return;
  }
  const Real p = suzuki_p<Real>(order);
  append_suzuki(out, h, p * dt, order - 2);
  append_suzuki(out, h, p * dt, order - 2);
  append_suzuki(out, h, (1 - 4 * p) * dt, order - 2);
  append_suzuki(out, h, p * dt, order - 2);
  append_suzuki(out, h, p * dt, order - 2);
}

}  // namespace detail

/// Gate list of one product-formula step S_m(dt), in application order.
template <typename Real>
std::vector<GateRecord<Real>> trotter_step(const BasicHamiltonian<Real>& h, Real dt, int order) {
  TrotterConfig probe;
  probe.order = order;
  probe.validate();
  std::vector<GateRecord<Real>> gates;
  detail::append_suzuki(gates, h, dt, order);
  return gates;
}

template <typename Real>
struct TrotterSequence {
  std::vector<GateRecord<Real>> step;  // S_m(t / r)
  StepCount count;                     // r and whether the cap was hit
  Real step_time = 0;
};

/// S_m(t/r) together with r; applying `step` r times approximates e^{-iHt}.
template <typename Real>
TrotterSequence<Real> trotter_gate_sequence(const BasicHamiltonian<Real>& h, Real t,
                                            const TrotterConfig& config) {
  config.validate();
  TrotterSequence<Real> seq;
  seq.count = trotter_step_count(static_cast<double>(t), config);
  seq.step_time = t / static_cast<Real>(seq.count.steps);
  seq.step = trotter_step(h, seq.step_time, config.order);
  return seq;
}

/// Applies the sequence literally, gate by gate, r times under `control`.
template <typename Real>
void apply_controlled_trotter(BasicStateVector<Real>& sv, std::size_t control,
                              const TrotterSequence<Real>& seq) {
  for (std::uint64_t k = 0; k < seq.count.steps; ++k)
    apply_controlled_gates<Real>(sv, control, seq.step);
}

/// Dense matrix of a gate list acting on an M-qubit register.
template <typename Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> gate_sequence_matrix(
    std::size_t qubits, std::span<const GateRecord<Real>> gates) {
  if (qubits > kMaxDenseQubits) throw CapabilityError("dense matrices are limited to 12 qubits");
  const Index dim = Index{1} << qubits;
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> m(dim, dim);
  BasicStateVector<Real> column(0, qubits);
  for (Index c = 0; c < dim; ++c) {
    column.set_basis_state(c);
    apply_gates<Real>(column, gates);
    m.col(static_cast<Eigen::Index>(c)) = column.amplitudes();
  }
  return m;
}

/// Dense e^{-iHt} from the spectral decomposition.
template <typename Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> exact_propagator_matrix(
    const BasicEigensystem<Real>& eig, Real t) {
  using Complex = std::complex<Real>;
  Eigen::Matrix<Complex, Eigen::Dynamic, 1> phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) phases[i] = std::polar(Real(1), -eig.values[i] * t);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// Controlled e^{-iHt}, either exact (spectral) or by a product formula.
///
/// Construction does all per-Hamiltonian work (one eigendecomposition in exact
/// mode), so a single instance is shared read-only by every scan cell. In
/// trotter mode one step is compiled to a diagonal (all-Z/I Hamiltonians) or a
/// dense 2^M matrix and raised to the r-th power by repeated squaring, which
/// equals r literal applications of the step up to rounding.
template <typename Real>
class BasicPropagator {
 public:
  using Complex = std::complex<Real>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  BasicPropagator(BasicHamiltonian<Real> h, TrotterConfig config)
      : h_(std::move(h)), config_(config), diagonal_(h_.is_diagonal()) {
    config_.validate();
    if (diagonal_) {
      energies_ = h_.diagonal();
    } else if (config_.mode == EvolutionMode::kExact) {
      eig_ = eigendecompose(h_);
      vectors_adjoint_ = eig_.vectors.adjoint();
    } else if (h_.qubits() > kMaxDenseQubits) {
      throw CapabilityError("trotter compilation is limited to 12 system qubits");
    }
  }

  const BasicHamiltonian<Real>& hamiltonian() const { return h_; }
  const TrotterConfig& config() const { return config_; }

  /// Applies the evolution on the control's |1> subspace; reports r used.
  StepCount apply_controlled(BasicStateVector<Real>& sv, std::size_t control, Real t) const {
    check(sv, control);
    const Index mask = sv.bit(control);
    if (config_.mode == EvolutionMode::kExact) {
      if (diagonal_) {
        Vector phases(energies_.size());
        for (Eigen::Index i = 0; i < energies_.size(); ++i) phases[i] = std::polar(Real(1), -energies_[i] * t);
        apply_diagonal(sv, phases, mask);
      } else {
        Vector phases(eig_.values.size());
        for (Eigen::Index i = 0; i < eig_.values.size(); ++i)
          phases[i] = std::polar(Real(1), -eig_.values[i] * t);
        Vector tmp;
        detail::for_each_system_block(sv, mask, [&](auto block) {
          tmp.noalias() = vectors_adjoint_ * block;
          tmp.array() *= phases.array();
          block.noalias() = eig_.vectors * tmp;
        });
      }
      return StepCount{};
    }

    const auto seq = trotter_gate_sequence(h_, t, config_);
    if (diagonal_) {
      Vector step = Vector::Ones(static_cast<Eigen::Index>(h_.dimension()));
      for (const auto& g : seq.step) {
        const auto& pe = std::get<PauliExponential<Real>>(g);
        const Complex plus = std::polar(Real(1), -pe.angle);
        const Complex minus = std::conj(plus);
        for (Index b = 0; b < h_.dimension(); ++b)
          step[static_cast<Eigen::Index>(b)] *= pe.pauli.phase(b).real() > 0 ? plus : minus;
      }
      Vector total = Vector::Ones(step.size());
      for (std::uint64_t r = seq.count.steps; r > 0; r >>= 1) {
        if (r & 1) total.array() *= step.array();
        step.array() *= step.array();
      }
      apply_diagonal(sv, total, mask);
    } else {
      Matrix step = gate_sequence_matrix<Real>(h_.qubits(), seq.step);
      Matrix total = Matrix::Identity(step.rows(), step.cols());
      for (std::uint64_t r = seq.count.steps; r > 0; r >>= 1) {
        if (r & 1) total = total * step;
        if (r > 1) step = step * step;
      }
      detail::matrix_kernel(sv, total, mask);
    }
    return seq.count;
  }

  /// Dense approximant (trotter mode) or exact propagator for tests and oracles.
  Matrix matrix(Real t) const {
    BasicStateVector<Real> probe(1, h_.qubits());
    Matrix m(h_.dimension(), h_.dimension());
    for (Index c = 0; c < h_.dimension(); ++c) {
      probe.set_basis_state((Index{1} << h_.qubits()) | c);
      apply_controlled(probe, 0, t);
      m.col(static_cast<Eigen::Index>(c)) =
          probe.amplitudes().segment(static_cast<Eigen::Index>(h_.dimension()),
                                     static_cast<Eigen::Index>(h_.dimension()));
    }
    return m;
  }

 private:
  void check(const BasicStateVector<Real>& sv, std::size_t control) const {
    if (sv.system_qubits() != h_.qubits())
      throw InvalidArgument("state has " + std::to_string(sv.system_qubits()) +
                            " system qubits, Hamiltonian acts on " + std::to_string(h_.qubits()));
    if (control >= sv.ancillas()) throw InvalidArgument("control must be an ancilla qubit");
  }

  static void apply_diagonal(BasicStateVector<Real>& sv, const Vector& phases, Index mask) {
    detail::for_each_system_block(sv, mask, [&](auto block) { block.array() *= phases.array(); });
  }

  BasicHamiltonian<Real> h_;
  TrotterConfig config_;
  bool diagonal_;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> energies_;
  BasicEigensystem<Real> eig_;
  Matrix vectors_adjoint_;
};

/// One-shot controlled evolution; builds a propagator per call.
template <typename Real>
StepCount controlled_time_evolution(BasicStateVector<Real>& sv, std::size_t control,
                                    const BasicHamiltonian<Real>& h, Real t,
                                    const TrotterConfig& config) {
  return BasicPropagator<Real>(h, config).apply_controlled(sv, control, t);
}

using Propagator = BasicPropagator<double>;

}  // namespace rodeo
