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
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rodeo/rodeo.hpp"

using namespace rodeo;

namespace {

TrotterConfig exact_mode() {
  TrotterConfig c;
  c.mode = EvolutionMode::kExact;
  return c;
}

RodeoParams params(std::size_t ancillas = 1, std::uint64_t rounds = 500, double dev = 20,
                   std::uint64_t seed = 42) {
  RodeoParams p;
  p.ancillas = ancillas;
  p.rounds = rounds;
  p.dev = dev;
  p.seed = seed;
  return p;
}

// Mean and standard error of x.
std::pair<double, double> mean_and_error(const std::vector<double>& x) {
  double s = 0, s2 = 0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(x.size());
  const double mean = s / n;
  return {mean, std::sqrt(std::max(0.0, s2 / n - mean * mean) / n)};
}

}  // namespace

TEST_CASE("sample_times") {
  auto rng = cell_stream(1, 0, 0);
  const auto t = sample_times(params(), 100000, rng);
  double mean = 0;
  for (double x : t) mean += x;
  mean /= t.size();
  double var = 0;
  for (double x : t) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / (t.size() - 1));
  CHECK(std::abs(mean) < 0.2);
  CHECK(std::abs(sd - 20) < 0.2);

  auto p = params(1, 1, 1e-12);
  p.tau = 0.75;
  auto rng2 = cell_stream(1, 0, 0);
  for (double x : sample_times(p, 100, rng2)) CHECK(std::abs(x - 0.75) < 1e-9);

  auto a = cell_stream(7, 3, 11);
  auto b = cell_stream(7, 3, 11);
  CHECK(sample_times(params(), 50, a) == sample_times(params(), 50, b));
  auto c = cell_stream(7, 3, 12);
  auto d = cell_stream(7, 3, 11);
  CHECK(sample_times(params(), 50, c) != sample_times(params(), 50, d));
}

TEST_CASE("score_average on an aligned B=0 eigenstate") {
  const auto h = build_tfim(TfimParams{5, 1.0, 0.0, true});
  for (const auto& cfg : {exact_mode(), TrotterConfig{}}) {
    const auto sa = score_average(h, 0, -5.0, params(), cfg);
    CHECK(sa.mean == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sa.std_error < 1e-7);
    CHECK(sa.samples == 500);
  }
  for (std::size_t n : {2u, 3u}) {
    for (auto m : {Measurement::kSequential, Measurement::kSimultaneous}) {
      auto p = params(n, 50);
      p.measurement = m;
      const auto sa = score_average(h, 31, -5.0, p, exact_mode());
      CHECK(sa.mean == doctest::Approx(-1.0).epsilon(1e-12));
      CHECK(sa.samples == (m == Measurement::kSequential ? 50 * n : 50));
    }
  }
  for (double e : {-5.5, -4.5}) {
    const auto sa = score_average(h, 0, e, params(), exact_mode());
    CHECK(std::abs(sa.mean) <= std::exp(-400 * 0.25 / 2) + 4 * sa.std_error);
  }
  CHECK_THROWS_AS(score_average(h, 32, -5.0, params(), exact_mode()), InvalidArgument);
}

TEST_CASE("score_average agrees with theory_score with N=1, d=20 and 500 rounds") {
  const auto h = build_tfim(TfimParams{5, 1.0, 0.5, true});
  const auto spectrum = exact_spectrum(h, true);
  int inside = 0, total = 0;
  for (double e : {-6.0, -5.4, -4.2, -2.0, -1.1, 0.3, 1.7, 3.0}) {
    for (Index n : {Index{0}, Index{5}, Index{21}}) {
      const auto sa = score_average(h, n, e, params(), exact_mode());
      const double theory = theory_score(spectrum, n, e, params());
      ++total;
      if (std::abs(sa.mean - theory) <= 4 * sa.std_error + 1e-12) ++inside;
      CHECK(sa.mean >= -1.0);
      CHECK(sa.mean <= 1.0);
    }
  }
  CHECK(inside >= total - 1);
}

TEST_CASE("closed_form_score") {
  const auto spectrum = exact_spectrum(build_tfim(TfimParams{3, 1.0, 0.5, true}), true);
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(closed_form_score(spectrum, 3, 0.7, zeros) == doctest::Approx(-1.0).epsilon(1e-12));

  const auto b0 = exact_spectrum(build_tfim(TfimParams{3, 1.0, 0.0, true}), true);
  const std::vector<double> one_time{1.3};
  // n = 0 is the aligned ground state with E = -3.
  CHECK(closed_form_score(b0, 0, -2.2, one_time) == doctest::Approx(-std::cos(0.8 * 1.3)).epsilon(1e-12));

  CHECK_THROWS_AS(closed_form_score(exact_spectrum(build_tfim(TfimParams{3, 1.0, 0.5, true}), false), 0, 0.0,
                                    one_time),
                  InvalidArgument);
}

TEST_CASE("circuit rounds reproduce the closed form to 1e-9") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const auto spectrum = exact_spectrum(h, true);
  const Propagator prop(h, exact_mode());
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> input(0, 7);
  std::uniform_real_distribution<double> energy(-4, 4);
  std::normal_distribution<double> time(0, 5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n_anc = 1 + trial % 3;
    std::vector<double> times(n_anc);
    for (auto& t : times) t = time(rng);
    const Index n = input(rng);
    const double e = energy(rng);
    for (auto m : {Measurement::kSequential, Measurement::kSimultaneous}) {
      const double circuit = round_score(prop, n, e, times, m);
      const double closed = closed_form_score(spectrum, n, e, times, m);
      CHECK(std::abs(circuit - closed) < 1e-9);
    }
  }
}

TEST_CASE("theory_score is the Gaussian average of the closed form") {
  const auto spectrum = exact_spectrum(build_tfim(TfimParams{3, 1.0, 0.5, true}), true);
  std::mt19937_64 rng(6);
  for (auto m : {Measurement::kSequential, Measurement::kSimultaneous}) {
    for (std::size_t n_anc : {1u, 2u}) {
      auto p = params(n_anc, 1, 1.5);
      p.tau = 0.4;
      p.measurement = m;
      for (double e : {-3.3, -1.0, 0.8}) {
        std::normal_distribution<double> time(p.tau, p.dev);
        std::vector<double> draws;
        for (int k = 0; k < 10000; ++k) {
          std::vector<double> t(n_anc);
          for (auto& x : t) x = time(rng);
          draws.push_back(closed_form_score(spectrum, 2, e, t, m));
        }
        const auto [mean, err] = mean_and_error(draws);
        CHECK(std::abs(mean - theory_score(spectrum, 2, e, p)) < 4 * err);
      }
    }
  }
}

TEST_CASE("basis-summed theory curve") {
  auto p = params();
  const std::vector<double> single{0.0};
  CHECK(theory_omega(single, 0.0, p) == 1.0);

  const auto b0 = exact_spectrum(build_tfim(TfimParams{5, 1.0, 0.0, true}), false);
  CHECK(theory_omega(b0.eigenvalues, -5.0, p) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(theory_omega(b0.eigenvalues, -1.0, p) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(theory_omega(b0.eigenvalues, 3.0, p) == doctest::Approx(10.0).epsilon(1e-12));

  auto q = params(1, 1, 1.0);
  q.tau = 0.3;
  CHECK(theory_omega(single, 1.0, q) == doctest::Approx(std::exp(-0.5) * std::cos(0.3)).epsilon(1e-12));
  CHECK(theory_omega(single, 1.0, q) == doctest::Approx(0.5795).epsilon(1e-4));
}

TEST_CASE("Gaussian sum rule and peak locations on the theory curve") {
  const auto spectrum = exact_spectrum(build_tfim(TfimParams{5, 1.0, 0.5, true}), false);
  const auto p = params();
  const EnergyGrid grid{-7, 6, 0.01};
  std::vector<double> curve;
  for (double e : grid.energies()) curve.push_back(theory_omega(spectrum.eigenvalues, e, p));
  double integral = 0;
  for (double w : curve) integral += 0.01 * w;
  CHECK(integral == doctest::Approx(32 * std::sqrt(2 * std::numbers::pi) / 20).epsilon(0.05));

  for (std::size_t i = 0; i < spectrum.levels.size(); ++i) {
    const double e = spectrum.levels[i].energy;
    const double gap_left = i == 0 ? 1e9 : e - spectrum.levels[i - 1].energy;
    const double gap_right = i + 1 == spectrum.levels.size() ? 1e9 : spectrum.levels[i + 1].energy - e;
    if (std::min(gap_left, gap_right) <= 3.0 / p.dev) continue;
    std::size_t best = 0;
    for (std::size_t l = 0; l < curve.size(); ++l)
      if (std::abs(grid.energy(l) - e) < 1.5 / p.dev && (best == 0 || curve[l] > curve[best])) best = l;
    CHECK(std::abs(grid.energy(best) - e) <= grid.step + 1e-12);
  }
}

TEST_CASE("energy grid") {
  const EnergyGrid g{-6, 5, 0.1};
  CHECK(g.size() == 111);
  CHECK(g.energy(10) == doctest::Approx(-5.0));
  CHECK(g.energy(110) == doctest::Approx(5.0));
  CHECK(EnergyGrid{-1.4, -0.6, 0.005}.size() == 161);
  CHECK(EnergyGrid{0, 1, 0.3}.size() == 4);
  CHECK_THROWS_AS((EnergyGrid{1, 0, 0.1}.size()), InvalidArgument);
  CHECK_THROWS_AS((EnergyGrid{0, 1, 0}.size()), InvalidArgument);
}

TEST_CASE("nos_scan is deterministic and worker-invariant") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const Propagator prop(h, exact_mode());
  const EnergyGrid grid{-4, 3, 0.25};
  const auto p = params(1, 40);
  const auto a = nos_scan(prop, grid, p, ScanOptions{1});
  const auto b = nos_scan(prop, grid, p, ScanOptions{4});
  const auto c = nos_scan(prop, grid, p, ScanOptions{1});
  CHECK(a.omega == b.omega);
  CHECK(a.std_error == b.std_error);
  CHECK(a.omega == c.omega);
  CHECK(a.evolutions == grid.size() * 8 * 40);
  for (std::size_t l = 0; l < a.omega.size(); ++l) {
    CHECK(std::abs(a.omega[l]) <= 8.0);
    CHECK(a.std_error[l] >= 0.0);
  }

  auto other_seed = p;
  other_seed.seed = 43;
  CHECK(nos_scan(prop, grid, other_seed).omega != a.omega);

  ScanOptions keep;
  keep.keep_per_input = true;
  const auto d = nos_scan(prop, grid, p, keep);
  REQUIRE(d.per_input.size() == grid.size() * 8);
  auto rng = cell_stream(p.seed, 5, 7);
  const auto cell = score_average(prop, 5, grid.energy(7), p, rng);
  CHECK(d.per_input[7 * 8 + 5].mean == cell.mean);
  CHECK(d.per_input[7 * 8 + 5].std_error == cell.std_error);
}

TEST_CASE("reported standard errors are calibrated") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const Propagator prop(h, exact_mode());
  std::vector<double> means;
  double mean_s = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto rng = cell_stream(seed, 2, 0);
    const auto sa = score_average(prop, 2, -1.2, params(1, 100, 2.0, seed), rng);
    means.push_back(sa.mean);
    mean_s += sa.std_error / 200;
  }
  double m = 0;
  for (double x : means) m += x / means.size();
  double var = 0;
  for (double x : means) var += (x - m) * (x - m) / (means.size() - 1);
  const double ratio = std::sqrt(var) / mean_s;
  CAPTURE(ratio);
  CHECK(ratio > 1 / 1.5);
  CHECK(ratio < 1.5);
}

TEST_CASE("shot readout converges to the expectation readout") {
  const auto h = build_tfim(TfimParams{3, 1.0, 0.5, true});
  const auto spectrum = exact_spectrum(h, true);
  auto p = params(1, 400, 1.0);
  p.readout = Readout::kShots;
  p.shots = 200;
  const auto sa = score_average(h, 1, -1.0, p, exact_mode());
  CHECK(std::abs(sa.mean - theory_score(spectrum, 1, -1.0, p)) < 4 * sa.std_error);
  CHECK_THROWS_AS(([] {
                    RodeoParams bad;
                    bad.readout = Readout::kShots;
                    bad.shots = 0;
                    bad.validate();
                  }()),
                  InvalidArgument);
}

TEST_CASE("parameter validation") {
  auto p = params();
  p.dev = -1;
  CHECK_THROWS_WITH_AS(p.validate(), "dev must be positive", InvalidArgument);
  p = params();
  p.ancillas = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = params();
  p.rounds = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("significant_peaks") {
  const std::vector<double> y{0, 1, 3, 1, 0, 0.2, 0, 2, 2, 1, 0};
  const std::vector<double> s(y.size(), 0.1);
  CHECK(significant_peaks(y, s, 4) == std::vector<std::size_t>{2, 7});
  CHECK(significant_peaks(y, s, 1) == std::vector<std::size_t>{2, 5, 7});
  CHECK(significant_peaks(y, s, 4, 2.5) == std::vector<std::size_t>{2});
  const std::vector<double> edge{5, 1, 0, 1, 6};
  CHECK(significant_peaks(edge, std::vector<double>(5, 0.0), 4) == std::vector<std::size_t>{0, 4});
  CHECK_THROWS_AS(significant_peaks(y, std::vector<double>{1.0}, 4), InvalidArgument);
  CHECK(clamp_nonnegative(std::vector<double>{-1, 0.5, -0.0}) == std::vector<double>{0, 0.5, 0});
}

TEST_CASE("scan CSV round-trips") {
  const auto h = build_tfim(TfimParams{2, 1.0, 0.3, false});
  const auto spectrum = exact_spectrum(h, false);
  const Propagator prop(h, exact_mode());
  ScanOptions opt;
  opt.theory_eigenvalues = &spectrum.eigenvalues;
  opt.keep_per_input = true;
  const auto est = nos_scan(prop, EnergyGrid{-2, 2, 0.5}, params(1, 20), opt);
  std::stringstream io;
  write_scan_csv(io, est);
  CHECK(io.str().rfind("energy,omega,stderr,theory\n", 0) == 0);
  const auto rows = read_scan_csv(io);
  REQUIRE(rows.size() == 9);
  for (std::size_t l = 0; l < rows.size(); ++l) {
    CHECK(rows[l].energy == doctest::Approx(est.grid.energy(l)).epsilon(1e-12));
    CHECK(rows[l].omega == est.omega[l]);
    CHECK(rows[l].std_error == est.std_error[l]);
  }
  std::stringstream per;
  write_per_input_csv(per, est);
  std::string header;
  std::getline(per, header);
  CHECK(header == "energy,n,sa,stderr");
  std::size_t lines = 0;
  for (std::string line; std::getline(per, line);) ++lines;
  CHECK(lines == 9 * 4);
}
