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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rodeo/error.hpp"

namespace rodeo {

// Basis-state and mask arithmetic is done in 64-bit words.
using Index = std::uint64_t;

// Qubit j of an M-qubit register is bit (M - 1 - j) of the basis index, so the
// integer n labels |n> in ordinary binary: |5> = |0...0101>.
constexpr Index qubit_bit(std::size_t qubit, std::size_t num_qubits) {
  return Index{1} << (num_qubits - 1 - qubit);
}

/// A real-weighted tensor product of single-qubit Pauli operators.
///
/// `letters[j]` acts on qubit j. A string made only of 'I' is a constant
/// energy shift; it is allowed but excluded from the trace rule.
template <typename Real>
class BasicPauliString {
 public:
  using Complex = std::complex<Real>;

  BasicPauliString(Real coefficient, std::string letters)
      : coefficient_(coefficient), letters_(std::move(letters)) {
    if (!std::isfinite(static_cast<double>(coefficient_)))
      throw InvalidArgument("Pauli coefficient must be finite");
    if (letters_.empty()) throw InvalidArgument("Pauli string must act on at least one qubit");
    if (letters_.size() > 63) throw CapabilityError("Pauli strings are limited to 63 qubits");
    const std::size_t m = letters_.size();
    for (std::size_t j = 0; j < m; ++j) {
      const Index bit = qubit_bit(j, m);
      switch (letters_[j]) {
        case 'I': break;
        case 'X': x_mask_ |= bit; break;
        case 'Z': z_mask_ |= bit; break;
        case 'Y':
          x_mask_ |= bit;
          z_mask_ |= bit;
          ++num_y_;
          break;
        default:
          throw InvalidArgument(std::string("unknown Pauli letter '") + letters_[j] + "'");
      }
    }
  }

  Real coefficient() const { return coefficient_; }
  const std::string& letters() const { return letters_; }
  std::size_t qubits() const { return letters_.size(); }

  // Bits flipped by the string (X and Y letters).
  Index x_mask() const { return x_mask_; }
  // Bits contributing a sign (Z and Y letters).
  Index z_mask() const { return z_mask_; }
  int y_count() const { return num_y_; }

  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }
  bool is_diagonal() const { return x_mask_ == 0; }

  // P|b> = phase(b) |b ^ x_mask()>, using Y = i X Z.
  Complex phase(Index basis) const {
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Complex p = kIPow[num_y_ & 3];
    if (std::popcount(basis & z_mask_) & 1) p = -p;
    return p;
  }

  // Two strings commute iff they anticommute on an even number of sites.
  bool commutes_with(const BasicPauliString& other) const {
    const int overlap = std::popcount((x_mask_ & other.z_mask_) ^ (z_mask_ & other.x_mask_));
    return (overlap & 1) == 0;
  }

 private:
  Real coefficient_;
  std::string letters_;
  Index x_mask_ = 0;
  Index z_mask_ = 0;
  int num_y_ = 0;
};

/// H = sum_j c_j P_j over a fixed register of M qubits.
template <typename Real>
class BasicHamiltonian {
 public:
  using Term = BasicPauliString<Real>;
  using Complex = std::complex<Real>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  BasicHamiltonian(std::size_t qubits, std::vector<Term> terms)
      : qubits_(qubits), terms_(std::move(terms)) {
    if (qubits_ == 0) throw InvalidArgument("Hamiltonian needs at least one qubit");
    if (terms_.empty()) throw InvalidArgument("Hamiltonian needs at least one term");
    for (const auto& t : terms_) {
      if (t.qubits() != qubits_)
        throw InvalidArgument("term '" + t.letters() + "' does not act on " +
                              std::to_string(qubits_) + " qubits");
    }
  }

  std::size_t qubits() const { return qubits_; }
  Index dimension() const { return Index{1} << qubits_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_diagonal() const {
    for (const auto& t : terms_)
      if (!t.is_diagonal()) return false;
    return true;
  }

  bool has_constant_term() const {
    for (const auto& t : terms_)
      if (t.is_identity()) return true;
    return false;
  }

  bool all_terms_commute() const {
    for (std::size_t a = 0; a < terms_.size(); ++a)
      for (std::size_t b = a + 1; b < terms_.size(); ++b)
        if (!terms_[a].commutes_with(terms_[b])) return false;
    return true;
  }

  // Diagonal <n|H|n> for every basis state; only the Z/I part contributes.
  Eigen::Matrix<Real, Eigen::Dynamic, 1> diagonal() const {
    Eigen::Matrix<Real, Eigen::Dynamic, 1> d = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(
        static_cast<Eigen::Index>(dimension()));
    for (const auto& t : terms_) {
      if (!t.is_diagonal()) continue;
      for (Index b = 0; b < dimension(); ++b)
        d[static_cast<Eigen::Index>(b)] += t.coefficient() * t.phase(b).real();
    }
    return d;
  }

 private:
  std::size_t qubits_;
  std::vector<Term> terms_;
};

// Dense matrices are only built at desk scale.
inline constexpr std::size_t kMaxDenseQubits = 12;

/// Dense 2^M x 2^M matrix of H in the computational basis.
template <typename Real>
typename BasicHamiltonian<Real>::Matrix dense_matrix(const BasicHamiltonian<Real>& h) {
  if (h.qubits() > kMaxDenseQubits)
    throw CapabilityError("dense matrices are limited to " + std::to_string(kMaxDenseQubits) +
                          " qubits, got " + std::to_string(h.qubits()));
  using Matrix = typename BasicHamiltonian<Real>::Matrix;
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    for (Index b = 0; b < h.dimension(); ++b) {
      const auto row = static_cast<Eigen::Index>(b ^ t.x_mask());
      m(row, static_cast<Eigen::Index>(b)) += t.coefficient() * t.phase(b);
    }
  }
  return m;
}

template <typename Real>
struct BasicTfimParams {
  std::size_t spins = 5;
  Real exchange = 1;  // J
  Real field = 0;     // B, nonnegative
  bool periodic = true;
};

/// 1D transverse-field Ising chain H = -J sum_<i,j> Z_i Z_j - B sum_i X_i.
///
/// Bonds are i -> (i + 1) mod M for i = 0..M-1 when periodic, so a periodic
/// two-site chain carries the (0,1) bond twice. A single site has no bond.
/// B = 0 emits no X terms.
template <typename Real>
BasicHamiltonian<Real> build_tfim(const BasicTfimParams<Real>& p) {
  if (p.spins == 0) throw InvalidArgument("TFIM needs at least one spin");
  if (!(p.field >= 0)) throw InvalidArgument("TFIM field B must be nonnegative");
  const std::size_t m = p.spins;
  std::vector<BasicPauliString<Real>> terms;
  const std::size_t bonds = m == 1 ? 0 : (p.periodic ? m : m - 1);
  for (std::size_t i = 0; i < bonds; ++i) {
    std::string letters(m, 'I');
    letters[i] = 'Z';
    letters[(i + 1) % m] = 'Z';
    terms.emplace_back(-p.exchange, std::move(letters));
  }
  if (p.field > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      std::string letters(m, 'I');
      letters[i] = 'X';
      terms.emplace_back(-p.field, std::move(letters));
    }
  }
  if (terms.empty()) {
    // One isolated spin at zero field: H = 0, kept as a zero-weight Z term.
    terms.emplace_back(Real{0}, std::string(m, 'Z'));
  }
  return BasicHamiltonian<Real>(m, std::move(terms));
}

using PauliString = BasicPauliString<double>;
using Hamiltonian = BasicHamiltonian<double>;
using TfimParams = BasicTfimParams<double>;

}  // namespace rodeo
