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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rodeo/evolution.hpp"
#include "rodeo/spectrum.hpp"

using namespace rodeo;
using Complex = std::complex<double>;

namespace {

// e^{-iHt} from the Kronecker-built matrix, independent of the library.
oracle::Matrix reference_propagator(const Hamiltonian& h, double t) {
  oracle::Matrix dense = oracle::Matrix::Zero(static_cast<Eigen::Index>(h.dimension()),
                                              static_cast<Eigen::Index>(h.dimension()));
  for (const auto& term : h.terms()) dense += term.coefficient() * oracle::pauli_string_matrix(term.letters());
  Eigen::SelfAdjointEigenSolver<oracle::Matrix> es(dense);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

oracle::Matrix trotter_matrix(const Hamiltonian& h, double t, int order, int r) {
  const auto step = trotter_step(h, t / r, order);
  const oracle::Matrix s = gate_sequence_matrix<double>(h.qubits(), step);
  oracle::Matrix u = oracle::Matrix::Identity(s.rows(), s.cols());
  for (int k = 0; k < r; ++k) u = s * u;
  return u;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

TrotterConfig trotter(int order, double delta, std::uint64_t cap = 5000) {
  TrotterConfig c;
  c.order = order;
  c.delta = delta;
  c.max_steps = cap;
  return c;
}

TrotterConfig exact_mode() {
  TrotterConfig c;
  c.mode = EvolutionMode::kExact;
  return c;
}

}  // namespace

TEST_CASE("suzuki_p") {
  CHECK(suzuki_p(4) == doctest::Approx(0.4144908).epsilon(1e-7));
  CHECK(suzuki_p(6) == doctest::Approx(0.3730658).epsilon(1e-7));
  for (int m = 4; m <= 12; m += 2) {
    const double p = suzuki_p(m);
    CHECK(1 - 4 * p < 0);
    CHECK(std::abs(p) < 0.5);
    CHECK(4 * p + (1 - 4 * p) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(suzuki_p(2), InvalidArgument);
  CHECK_THROWS_AS(suzuki_p(5), InvalidArgument);
}

TEST_CASE("trotter_step_count") {
  CHECK(trotter_step_count(0, trotter(1, 0.1)).steps == 1);
  CHECK(trotter_step_count(1, trotter(1, 0.1)).steps == 10);
  CHECK_FALSE(trotter_step_count(1, trotter(1, 0.1)).capped);
  const auto capped = trotter_step_count(40, trotter(1, 0.1, 5000));
  CHECK(capped.steps == 5000);
  CHECK(capped.capped);
  CHECK(trotter_step_count(-1, trotter(1, 0.1)).steps == 10);
  // m = 2: ceil(2^{1.5} / 0.1^{0.5}) = ceil(8.944...) = 9
  CHECK(trotter_step_count(2, trotter(2, 0.1)).steps == 9);

  std::uint64_t last = 0;
  for (double t = 0; t < 50; t += 0.37) {
    const auto r = trotter_step_count(t, trotter(2, 0.05)).steps;
    CHECK(r >= last);
    last = r;
  }

  CHECK_THROWS_AS(trotter_step_count(1, trotter(3, 0.1)), InvalidArgument);
  CHECK_THROWS_AS(trotter_step_count(1, trotter(1, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(trotter_step_count(1, trotter(1, 0.1, 0)), InvalidArgument);
}

TEST_CASE("first order is exact for commuting terms") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.0, true});
  for (double t : {0.0, 0.3, 1.7, -4.2, 25.0}) {
    const auto u = trotter_matrix(h, t, 1, 1);
    CHECK(oracle::operator_norm(u - reference_propagator(h, t)) < 1e-12);
  }
}

TEST_CASE("second order step is palindromic") {
  const auto h = build_tfim(TfimParams{4, 1.0, 0.5, true});
  const auto gates = trotter_step(h, 0.3, 2);
  REQUIRE(gates.size() == 2 * h.terms().size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& a = std::get<PauliExponential<double>>(gates[i]);
    const auto& b = std::get<PauliExponential<double>>(gates[gates.size() - 1 - i]);
    CHECK(a.pauli.letters() == b.pauli.letters());
    CHECK(a.angle == b.angle);
  }
}

TEST_CASE("product formula error scales with the order") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const auto exact = reference_propagator(h, 1.0);
  const std::vector<double> rs{4, 8, 16, 32, 64};
  for (int order : {1, 2, 4}) {
    std::vector<double> err;
    for (double r : rs) err.push_back(oracle::operator_norm(trotter_matrix(h, 1.0, order, static_cast<int>(r)) - exact));
    const double slope = fitted_slope(rs, err);
    CAPTURE(order);
    CAPTURE(slope);
    CHECK(slope <= -order + 0.2);
    if (order == 1) CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("compiled trotter propagator equals the literal gate-by-gate path") {
  std::mt19937_64 rng(1);
  for (bool field : {false, true}) {
    const auto h = build_tfim(TfimParams{3, 1.0, field ? 0.5 : 0.0, true});
    for (int order : {1, 2, 4}) {
      const Propagator prop(h, trotter(order, 0.1));
      for (double t : {0.4, -1.3, 2.9}) {
        StateVector a(2, 3, oracle::random_state(32, rng));
        StateVector b = a;
        const auto count = prop.apply_controlled(a, 1, t);
        const auto seq = trotter_gate_sequence(h, t, trotter(order, 0.1));
        apply_controlled_trotter(b, 1, seq);
        CHECK(count.steps == seq.count.steps);
        CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-11);
        CHECK(std::abs(a.norm_squared() - 1) < 1e-10);
      }
    }
  }
}

TEST_CASE("trotter mode on a commuting Hamiltonian matches exact mode even when capped") {
  const auto h = build_tfim(TfimParams{5, 1.0, 0.0, true});
  const Propagator trot(h, trotter(1, 0.1));
  const Propagator ex(h, exact_mode());
  std::mt19937_64 rng(2);
  for (double t : {0.0, 3.1, -17.0, 55.0}) {
    StateVector a(1, 5, oracle::random_state(64, rng));
    StateVector b = a;
    const auto count = trot.apply_controlled(a, 0, t);
    ex.apply_controlled(b, 0, t);
    CHECK(count.capped == (std::abs(t) > 22.4));
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("exact mode") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const Propagator prop(h, exact_mode());
  std::mt19937_64 rng(3);

  SUBCASE("t = 0 is the identity in both modes") {
    for (const auto& cfg : {exact_mode(), trotter(1, 0.1), trotter(2, 0.1)}) {
      StateVector sv(1, 3, oracle::random_state(16, rng));
      const auto before = sv.amplitudes();
      controlled_time_evolution(sv, 0, h, 0.0, cfg);
      CHECK((sv.amplitudes() - before).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  SUBCASE("eigenstates acquire e^{-iE t}") {
    const auto eig = eigendecompose(h);
    for (Eigen::Index x = 0; x < 8; ++x) {
      StateVector sv(1, 3);
      sv.amplitudes().setZero();
      sv.amplitudes().segment(8, 8) = eig.vectors.col(x);
      prop.apply_controlled(sv, 0, 1.9);
      const Eigen::VectorXcd want = std::polar(1.0, -eig.values[x] * 1.9) * eig.vectors.col(x);
      CHECK((sv.amplitudes().segment(8, 8) - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("matches the reference propagator") {
    CHECK(oracle::operator_norm(prop.matrix(2.2) - reference_propagator(h, 2.2)) < 1e-12);
  }

  SUBCASE("time additivity") {
    for (int trial = 0; trial < 10; ++trial) {
      StateVector a(1, 3, oracle::random_state(16, rng));
      StateVector b = a;
      prop.apply_controlled(a, 0, 0.8);
      prop.apply_controlled(a, 0, -2.1);
      prop.apply_controlled(b, 0, 0.8 - 2.1);
      CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("trotter branch fidelity at delta = 0.01") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    StateVector a(1, 3, oracle::random_state(16, rng));
    StateVector b = a;
    controlled_time_evolution(a, 0, h, 0.7, trotter(1, 0.01));
    controlled_time_evolution(b, 0, h, 0.7, exact_mode());
    const double fidelity = std::norm(a.amplitudes().dot(b.amplitudes()));
    CHECK(fidelity >= 1 - 5 * 0.01);
  }
}

TEST_CASE("every emitted sequence preserves the norm") {
  std::mt19937_64 rng(5);
  const Hamiltonian h(3, {PauliString(0.4, "XYZ"), PauliString(-0.9, "ZZI"), PauliString(0.3, "IYX")});
  for (int order : {1, 2, 4, 6}) {
    const auto seq = trotter_gate_sequence(h, 2.5, trotter(order, 0.1));
    StateVector sv(1, 3, oracle::random_state(16, rng));
    apply_controlled_trotter(sv, 0, seq);
    CHECK(std::abs(sv.norm_squared() - 1) < 1e-10);
  }
}

TEST_CASE("propagator argument checks") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const Propagator prop(h, exact_mode());
  StateVector wrong(1, 2);
  CHECK_THROWS_AS(prop.apply_controlled(wrong, 0, 1.0), InvalidArgument);
  StateVector sv(1, 3);
  CHECK_THROWS_AS(prop.apply_controlled(sv, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Propagator(h, trotter(3, 0.1)), InvalidArgument);
}
