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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rodeo/pauli.hpp"

namespace rodeo {

/// Eigenpairs of a Hamiltonian, eigenvalues ascending, eigenvectors as columns.
template <typename Real>
struct BasicEigensystem {
  using Complex = std::complex<Real>;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> values;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

template <typename Real>
BasicEigensystem<Real> eigendecompose(const BasicHamiltonian<Real>& h) {
  using Matrix = typename BasicHamiltonian<Real>::Matrix;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense_matrix(h));
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Real>
struct BasicLevel {
  Real energy;
  std::size_t multiplicity;
};

/// Merges sorted eigenvalues into levels: neighbours closer than `merge_tol`
/// share a level (single linkage) whose energy is the mean of its members.
template <typename Real>
std::vector<BasicLevel<Real>> level_degeneracies(const std::vector<Real>& sorted_eigenvalues,
                                                 Real merge_tol) {
  if (!(merge_tol >= 0)) throw InvalidArgument("merge tolerance must be nonnegative");
  std::vector<BasicLevel<Real>> levels;
  std::size_t begin = 0;
  const std::size_t n = sorted_eigenvalues.size();
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && sorted_eigenvalues[i] - sorted_eigenvalues[i - 1] <= merge_tol) continue;
    Real sum = 0;
    for (std::size_t k = begin; k < i; ++k) sum += sorted_eigenvalues[k];
    levels.push_back({sum / static_cast<Real>(i - begin), i - begin});
    begin = i;
  }
  return levels;
}

template <typename Real>
struct BasicSpectrum {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  std::size_t qubits = 0;
  // 2^M eigenvalues, ascending, repeated by degeneracy.
  std::vector<Real> eigenvalues;
  // overlaps(x, n) = |<n|x>|^2; rows are eigenstates, columns basis states.
  std::optional<Matrix> overlaps;
  std::vector<BasicLevel<Real>> levels;

  bool has_overlaps() const { return overlaps.has_value(); }
};

inline constexpr double kDefaultMergeTol = 1e-9;

/// Dense diagonalisation oracle.
template <typename Real>
BasicSpectrum<Real> exact_spectrum(const BasicHamiltonian<Real>& h, bool with_overlaps,
                                   Real merge_tol = Real(kDefaultMergeTol)) {
  const auto eig = eigendecompose(h);
  BasicSpectrum<Real> s;
  s.qubits = h.qubits();
  s.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  if (with_overlaps) s.overlaps = eig.vectors.cwiseAbs2().transpose();
  s.levels = level_degeneracies(s.eigenvalues, merge_tol);
  return s;
}

template <typename Real>
std::vector<BasicLevel<Real>> level_degeneracies(const BasicSpectrum<Real>& s, Real merge_tol) {
  return level_degeneracies(s.eigenvalues, merge_tol);
}

using Eigensystem = BasicEigensystem<double>;
using Level = BasicLevel<double>;
using Spectrum = BasicSpectrum<double>;

}  // namespace rodeo
