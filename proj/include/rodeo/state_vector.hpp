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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rodeo/error.hpp"
#include "rodeo/pauli.hpp"

namespace rodeo {

// Ancilla k is global qubit k; system qubit j is global qubit N + j. With
// qubit 0 as the most significant bit, the global basis index is
// (ancilla bits << M) | system bits, i.e. |a> (x) |n> in Kronecker order, and
// every fixed ancilla pattern owns one contiguous block of 2^M amplitudes.
template <typename Real>
class BasicStateVector {
 public:
  using Complex = std::complex<Real>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  static constexpr std::size_t kMaxQubits = 30;

  BasicStateVector(std::size_t ancillas, std::size_t system_qubits)
      : ancillas_(ancillas), system_(system_qubits) {
    if (ancillas_ + system_ == 0) throw InvalidArgument("state vector needs at least one qubit");
    if (ancillas_ + system_ > kMaxQubits)
      throw CapabilityError("state vectors are limited to " + std::to_string(kMaxQubits) +
                            " qubits");
    amplitudes_ = Vector::Zero(static_cast<Eigen::Index>(dimension()));
    amplitudes_[0] = Complex(1);
  }

  BasicStateVector(std::size_t ancillas, std::size_t system_qubits, Vector amplitudes)
      : BasicStateVector(ancillas, system_qubits) {
    if (static_cast<Index>(amplitudes.size()) != dimension())
      throw InvalidArgument("amplitude count does not match 2^(N+M)");
    amplitudes_ = std::move(amplitudes);
  }

  std::size_t ancillas() const { return ancillas_; }
  std::size_t system_qubits() const { return system_; }
  std::size_t qubits() const { return ancillas_ + system_; }
  Index dimension() const { return Index{1} << qubits(); }
  Index system_dimension() const { return Index{1} << system_; }

  // Index bit carried by global qubit q.
  Index bit(std::size_t q) const {
    check_qubit(q);
    return qubit_bit(q, qubits());
  }

  void check_qubit(std::size_t q) const {
    if (q >= qubits())
      throw InvalidArgument("qubit " + std::to_string(q) + " out of range for " +
                            std::to_string(qubits()) + " qubits");
  }

  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

  Real norm_squared() const { return amplitudes_.squaredNorm(); }

  /// Resets to the basis state with the given global index.
  void set_basis_state(Index index) {
    if (index >= dimension()) throw InvalidArgument("basis index out of range");
    amplitudes_.setZero();
    amplitudes_[static_cast<Eigen::Index>(index)] = Complex(1);
  }

 private:
  std::size_t ancillas_;
  std::size_t system_;
  Vector amplitudes_;
};

// ---------------------------------------------------------------------------
// Gate records

template <typename Real>
struct HadamardGate {
  std::size_t qubit;
};

// P(phi) = diag(1, e^{i phi}).
template <typename Real>
struct PhaseGate {
  std::size_t qubit;
  Real angle;
};

// exp(-i angle P) with P a Pauli string over the whole system register.
template <typename Real>
struct PauliExponential {
  BasicPauliString<Real> pauli;
  Real angle;
};

// Arbitrary unitary over the whole system register.
template <typename Real>
struct DenseUnitary {
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> matrix;

  explicit DenseUnitary(Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> m)
      : matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols()) throw InvalidArgument("dense payload must be square");
    const auto dim = matrix.rows();
    if (dim == 0 || (dim & (dim - 1)) != 0)
      throw InvalidArgument("dense payload dimension must be a power of two");
    if (dim > (Eigen::Index{1} << kMaxDenseQubits))
      throw CapabilityError("dense payloads are limited to " + std::to_string(kMaxDenseQubits) +
                            " system qubits");
    const auto defect = (matrix.adjoint() * matrix -
                         Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>::Identity(
                             dim, dim))
                            .cwiseAbs()
                            .maxCoeff();
    if (static_cast<double>(defect) > 1e-10) throw InvalidArgument("dense payload is not unitary");
  }
};

template <typename Real>
using GateRecord =
    std::variant<HadamardGate<Real>, PhaseGate<Real>, PauliExponential<Real>, DenseUnitary<Real>>;

// ---------------------------------------------------------------------------
// Kernels. `control_mask` selects the amplitudes a gate may touch: only those
// whose index has every control bit set. A zero mask means uncontrolled.

namespace detail {

template <typename Real>
void hadamard_kernel(BasicStateVector<Real>& sv, std::size_t q, Index control_mask) {
  const Index bit = sv.bit(q);
  const Real s = Real(1) / std::numbers::sqrt2_v<Real>;
  auto& a = sv.amplitudes();
  for (Index i = 0; i < sv.dimension(); ++i) {
    if ((i & bit) || (i & control_mask) != control_mask) continue;
    const auto lo = static_cast<Eigen::Index>(i);
    const auto hi = static_cast<Eigen::Index>(i | bit);
    const auto x = a[lo];
    const auto y = a[hi];
    a[lo] = (x + y) * s;
    a[hi] = (x - y) * s;
  }
}

template <typename Real>
void phase_kernel(BasicStateVector<Real>& sv, std::size_t q, Real angle, Index control_mask) {
  const Index mask = sv.bit(q) | control_mask;
  const auto w = std::polar(Real(1), angle);
  auto& a = sv.amplitudes();
  for (Index i = 0; i < sv.dimension(); ++i)
    if ((i & mask) == mask) a[static_cast<Eigen::Index>(i)] *= w;
}

// Visits the 2^M-long system block of every ancilla pattern passing the mask.
template <typename Real, typename Fn>
void for_each_system_block(BasicStateVector<Real>& sv, Index control_mask, Fn&& fn) {
  const Index block = sv.system_dimension();
  const Index patterns = Index{1} << sv.ancillas();
  for (Index p = 0; p < patterns; ++p) {
    const Index base = p * block;
    if ((base & control_mask) != control_mask) continue;
    fn(sv.amplitudes().segment(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(block)));
  }
}

template <typename Real>
void pauli_exponential_kernel(BasicStateVector<Real>& sv, const PauliExponential<Real>& g,
                              Index control_mask) {
  using Complex = std::complex<Real>;
  if (g.pauli.qubits() != sv.system_qubits())
    throw InvalidArgument("Pauli payload width does not match the system register");
  const Real c = std::cos(g.angle);
  const Real s = std::sin(g.angle);
  const Index x = g.pauli.x_mask();
  const Index dim = sv.system_dimension();
  for_each_system_block(sv, control_mask, [&](auto block) {
    if (x == 0) {
      // Diagonal string: a phase e^{-i angle (+-1)} per basis state.
      const Complex plus(c, -s);
      const Complex minus(c, s);
      for (Index b = 0; b < dim; ++b)
        block[static_cast<Eigen::Index>(b)] *= g.pauli.phase(b).real() > 0 ? plus : minus;
      return;
    }
    const Complex mis(0, -s);
    for (Index b = 0; b < dim; ++b) {
      const Index partner = b ^ x;
      if (partner < b) continue;
      const auto ib = static_cast<Eigen::Index>(b);
      const auto ip = static_cast<Eigen::Index>(partner);
      const Complex vb = block[ib];
      const Complex vp = block[ip];
      // (P v)_b = phase(partner) v_partner and vice versa.
      block[ib] = c * vb + mis * g.pauli.phase(partner) * vp;
      block[ip] = c * vp + mis * g.pauli.phase(b) * vb;
    }
  });
}

template <typename Real>
void matrix_kernel(BasicStateVector<Real>& sv,
                   const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& m,
                   Index control_mask) {
  if (static_cast<Index>(m.rows()) != sv.system_dimension())
    throw InvalidArgument("dense payload does not match the system register");
  typename BasicStateVector<Real>::Vector tmp;
  for_each_system_block(sv, control_mask, [&](auto block) {
    tmp.noalias() = m * block;
    block = tmp;
  });
}

template <typename Real>
void apply_masked(BasicStateVector<Real>& sv, const GateRecord<Real>& gate, Index control_mask) {
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, HadamardGate<Real>>) {
          hadamard_kernel(sv, g.qubit, control_mask);
        } else if constexpr (std::is_same_v<G, PhaseGate<Real>>) {
          phase_kernel(sv, g.qubit, g.angle, control_mask);
        } else if constexpr (std::is_same_v<G, PauliExponential<Real>>) {
          pauli_exponential_kernel(sv, g, control_mask);
        } else {
          matrix_kernel(sv, g.matrix, control_mask);
        }
      },
      gate);
}

}  // namespace detail

/// |1>^{(x)N} (x) |n>: ancillas prepared in |1>, system in basis state n.
template <typename Real = double>
BasicStateVector<Real> init_rider_state(std::size_t ancillas, std::size_t system_qubits, Index n) {
  BasicStateVector<Real> sv(ancillas, system_qubits);
  if (n >= sv.system_dimension())
    throw InvalidArgument("basis input " + std::to_string(n) + " out of range for " +
                          std::to_string(system_qubits) + " system qubits");
  const Index all_ones = (Index{1} << ancillas) - 1;
  sv.set_basis_state((all_ones << system_qubits) | n);
  return sv;
}

template <typename Real>
void apply_hadamard(BasicStateVector<Real>& sv, std::size_t qubit) {
  detail::hadamard_kernel(sv, qubit, 0);
}

template <typename Real>
void apply_phase_shift(BasicStateVector<Real>& sv, std::size_t qubit, Real phi) {
  detail::phase_kernel(sv, qubit, phi, 0);
}

template <typename Real>
void apply_gate(BasicStateVector<Real>& sv, const GateRecord<Real>& gate) {
  detail::apply_masked(sv, gate, 0);
}

template <typename Real>
void apply_gates(BasicStateVector<Real>& sv, std::span<const GateRecord<Real>> gates) {
  for (const auto& g : gates) detail::apply_masked(sv, g, 0);
}

/// Applies `payload` on the subspace where `control` reads |1>.
template <typename Real>
void apply_controlled_unitary(BasicStateVector<Real>& sv, std::size_t control,
                              const GateRecord<Real>& payload) {
  sv.check_qubit(control);
  const bool overlaps = std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, HadamardGate<Real>> || std::is_same_v<G, PhaseGate<Real>>)
          return g.qubit == control;
        else
          return control >= sv.ancillas();  // register payloads cover every system qubit
      },
      payload);
  if (overlaps) throw InvalidArgument("control qubit overlaps the payload targets");
  detail::apply_masked(sv, payload, sv.bit(control));
}

template <typename Real>
void apply_controlled_gates(BasicStateVector<Real>& sv, std::size_t control,
                            std::span<const GateRecord<Real>> gates) {
  for (const auto& g : gates) apply_controlled_unitary(sv, control, g);
}

/// <sigma^z> on one qubit: +1 for |0>, -1 for |1>.
template <typename Real>
Real expect_z(const BasicStateVector<Real>& sv, std::size_t qubit) {
  const Index bit = sv.bit(qubit);
  Real plus = 0;
  Real minus = 0;
  for (Index i = 0; i < sv.dimension(); ++i) {
    const Real p = std::norm(sv[i]);
    (i & bit ? minus : plus) += p;
  }
  const Real total = plus + minus;
  return total > 0 ? std::clamp((plus - minus) / total, Real(-1), Real(1)) : Real(0);
}

/// <Z (x) Z (x) ... > over the listed qubits.
template <typename Real>
Real expect_z_product(const BasicStateVector<Real>& sv, std::span<const std::size_t> qubits) {
  Index mask = 0;
  for (auto q : qubits) mask |= sv.bit(q);
  Real even = 0;
  Real odd = 0;
  for (Index i = 0; i < sv.dimension(); ++i) {
    const Real p = std::norm(sv[i]);
    (std::popcount(i & mask) & 1 ? odd : even) += p;
  }
  const Real total = even + odd;
  return total > 0 ? std::clamp((even - odd) / total, Real(-1), Real(1)) : Real(0);
}

/// Mean of `shots` +-1 outcomes for an observable with expectation `expectation`.
template <typename Real, typename Rng>
Real sample_pm1(Real expectation, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw InvalidArgument("shots must be at least 1");
  const double p_minus = std::clamp((1.0 - static_cast<double>(expectation)) / 2.0, 0.0, 1.0);
  std::binomial_distribution<std::uint64_t> minus_count(shots, p_minus);
  const auto k = minus_count(rng);
  const double n = static_cast<double>(shots);
  return static_cast<Real>((n - 2.0 * static_cast<double>(k)) / n);
}

template <typename Real, typename Rng>
Real sample_z(const BasicStateVector<Real>& sv, std::size_t qubit, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw InvalidArgument("shots must be at least 1");
  return sample_pm1(expect_z(sv, qubit), shots, rng);
}

using StateVector = BasicStateVector<double>;
using Gate = GateRecord<double>;

// Binary dump: "RDSV", uint32 N, uint32 M, uint32 version, then interleaved
// little-endian float64 (real, imag) pairs.
void write_state_vector(std::ostream& out, const StateVector& sv);
StateVector read_state_vector(std::istream& in);

}  // namespace rodeo
