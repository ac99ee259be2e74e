#include "doctest.h"

#include <cmath>
#include <random>

#include "kzk/bdg.hpp"
#include "kzk/errors.hpp"

using namespace kzk;

TEST_CASE("momentum grid holds the half-integer pseudomomenta") {
  const Eigen::ArrayXd k4 = momentum_grid(4);
  REQUIRE(k4.size() == 4);
  CHECK(k4(0) == doctest::Approx(-3 * kPi / 4));
  CHECK(k4(1) == doctest::Approx(-kPi / 4));
  CHECK(k4(2) == doctest::Approx(kPi / 4));
  CHECK(k4(3) == doctest::Approx(3 * kPi / 4));

  const Eigen::ArrayXd k2 = momentum_grid(2);
  CHECK(k2(0) == doctest::Approx(-kPi / 2));
  CHECK(k2(1) == doctest::Approx(kPi / 2));

  const Eigen::ArrayXd k8 = momentum_grid(8);
  REQUIRE(k8.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(k8(i) == -k8(7 - i));
    CHECK(std::abs(k8(i)) > 0.0);
    CHECK(std::abs(k8(i)) < kPi);
    if (i > 0) CHECK(k8(i) > k8(i - 1));
  }
  CHECK(k8.abs().minCoeff() == doctest::Approx(kPi / 8));

  CHECK_THROWS_AS(momentum_grid(5), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(0), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(-4), std::invalid_argument);
}

TEST_CASE("positive midpoint grid is the upper half of the finite-N grid") {
  const Eigen::ArrayXd half = positive_momenta(6);
  const Eigen::ArrayXd full = momentum_grid(12);
  for (int i = 0; i < 6; ++i) CHECK(half(i) == doctest::Approx(full(6 + i)).epsilon(1e-15));
}

TEST_CASE("dispersion") {
  CHECK(dispersion(1.0, 0.0) == 0.0);
  CHECK(dispersion(0.0, kPi / 3) == doctest::Approx(2.0));
  CHECK(dispersion(2.0, kPi) == doctest::Approx(6.0));
}

TEST_CASE("stationary modes diagonalize the BdG matrix") {
  const auto [g0, e0] = stationary_modes(0.0, kPi / 2);
  CHECK(g0.u.real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(g0.v.real() == doctest::Approx(std::sqrt(0.5)));

  const auto [ginf, einf] = stationary_modes(1e6, kPi / 2);
  CHECK(std::abs(ginf.u) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(ginf.v) < 1e-6);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> gd(0.0, 3.0), kd(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    const double g = gd(rng), k = kd(rng);
    const auto [gs, es] = stationary_modes(g, k);
    CHECK(std::abs(std::conj(gs.u) * es.u + std::conj(gs.v) * es.v) < 1e-12);
    // Independent check: M (u, v) = +-eps (u, v) with the explicit 2x2 matrix.
    const double a = 2 * (g - std::cos(k)), b = 2 * std::sin(k), eps = dispersion(g, k);
    CHECK(std::abs(a * gs.u + b * gs.v - eps * gs.u) < 1e-12);
    CHECK(std::abs(b * gs.u - a * gs.v - eps * gs.v) < 1e-12);
    CHECK(std::abs(a * es.u + b * es.v + eps * es.u) < 1e-12);
    CHECK(std::abs(b * es.u - a * es.v + eps * es.v) < 1e-12);
  }
  // At g = 0 the modes are (sin k/2, cos k/2) and (cos k/2, -sin k/2).
  for (double k : {0.3, 1.1, 2.9, -0.7}) {
    const auto [gs, es] = stationary_modes(0.0, k);
    CHECK(gs.u.real() == doctest::Approx(std::sin(k / 2)));
    CHECK(gs.v.real() == doctest::Approx(std::cos(k / 2)));
    CHECK(es.u.real() == doctest::Approx(std::cos(k / 2)));
    CHECK(es.v.real() == doctest::Approx(-std::sin(k / 2)));
  }
  CHECK_THROWS_AS(stationary_modes(1.0, 0.0), SingularPoint);
}

TEST_CASE("ramp schedule") {
  const RampSpec lin = RampSpec::linear(16);
  CHECK(ramp_value(lin, -16) == doctest::Approx(1.0));
  CHECK(ramp_value(lin, 0) == 0.0);
  CHECK_THROWS_AS(ramp_value(lin, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(ramp_value(lin, lin.t_start() - 1), std::invalid_argument);

  const RampSpec wait = RampSpec::waiting(4, 0.5, 2);
  CHECK(wait.plateau_end() - wait.plateau_begin() == doctest::Approx(8.0));
  CHECK(wait.t_end() == doctest::Approx(8.0));
  CHECK(ramp_value(wait, wait.t_end()) == doctest::Approx(0.0));
  // Continuous and non-increasing.
  double prev = ramp_value(wait, wait.t_start());
  for (double t = wait.t_start(); t <= wait.t_end(); t += 0.01) {
    const double g = ramp_value(wait, t);
    CHECK(g <= prev + 1e-12);
    CHECK(prev - g < 0.01 / 4 + 1e-12);
    prev = g;
  }
  CHECK(ramp_value(wait, 0.5 * (wait.plateau_begin() + wait.plateau_end())) == 0.5);

  CHECK_THROWS_AS(RampSpec::linear(-1), std::invalid_argument);
  CHECK_THROWS_AS(RampSpec::linear(4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(RampSpec::waiting(4, 1.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(RampSpec::waiting(4, 0.5, -1), std::invalid_argument);
}

TEST_CASE("mode evolution preserves the norm and converges in the tolerance") {
  for (double tau : {4.0, 16.0, 64.0}) {
    for (double k : {0.02, 0.2, 1.0, 2.5}) {
      const RampSpec ramp = RampSpec::linear(tau);
      OdeOptions opt;
      const ModeState a = evolve_mode(k, ramp, opt);
      CHECK(std::abs(a.norm_squared() - 1.0) < 1e-9);
      OdeOptions half = opt;
      half.rtol /= 2;
      half.atol /= 2;
      const ModeState b = evolve_mode(k, ramp, half);
      CHECK(std::abs(a.u - b.u) + std::abs(a.v - b.v) < 10 * opt.rtol);
    }
  }
}

TEST_CASE("near-adiabatic ramp ends in the g = 0 ground state") {
  const double k = kPi / 2;
  const ModeState s = evolve_mode(k, RampSpec::linear(1e4));
  const ModeState ground = stationary_modes(0.0, k).first;
  const double fidelity = std::norm(std::conj(ground.u) * s.u + std::conj(ground.v) * s.v);
  CHECK(fidelity > 0.999);
}

TEST_CASE("default starting field is converged against twice its value") {
  for (double tau : {4.0, 16.0, 64.0}) {
    const RampSpec base = RampSpec::linear(tau);
    for (double k : {0.05, 0.3, 1.0, 2.0, 3.0}) {
      const double p1 = extract_excitation(evolve_mode(k, base)).p;
      const double p2 = extract_excitation(evolve_mode(k, RampSpec::linear(tau, 2 * base.g_start))).p;
      CHECK(std::abs(p1 - p2) < 1e-6);
    }
  }
}

TEST_CASE("excitation extraction") {
  const double k = 0.9;
  const auto [gs, es] = stationary_modes(0.0, k);
  const Excitation g = extract_excitation(gs);
  CHECK(g.p == doctest::Approx(0.0));
  CHECK(g.phi == 0.0);
  const Excitation e = extract_excitation(es);
  CHECK(e.p == doctest::Approx(1.0));
  CHECK(e.phi == 0.0);

  // Superposition with known amplitudes a_E e^{i 0.4}, a_G.
  const double pe = 0.3;
  const cplx ae = std::polar(std::sqrt(pe), 0.4), ag = std::sqrt(1 - pe);
  const ModeState mix{ae * es.u + ag * gs.u, ae * es.v + ag * gs.v, k};
  const Excitation x = extract_excitation(mix);
  CHECK(x.p == doctest::Approx(pe));
  CHECK(x.phi == doctest::Approx(0.4));

  CHECK_THROWS_AS(extract_excitation(ModeState{2.0, 0.0, k}), std::invalid_argument);
}

TEST_CASE("Landau-Zener spectrum") {
  const double tau = 16;
  Eigen::ArrayXd ks(3);
  ks << 0.0, 0.25, 0.5;
  const ModeSpectrum s = lz_spectrum(tau, ks);
  CHECK(s.p(0) == 1.0);
  CHECK(s.p(1) == doctest::Approx(1.8674e-3).epsilon(1e-4));
  CHECK(s.p(1) == doctest::Approx(std::exp(-2 * kPi)));

  const double e = std::exp(1.0);
  const ModePoint p0 = evaluate(LandauZenerModel{e, {}}, 0.0);
  const ModePoint p1 = evaluate(LandauZenerModel{e, {}}, 0.7);
  CHECK(p1.phi - p0.phi == doctest::Approx(0.49 * e));

  const ModeSpectrum grid = lz_spectrum(16, 512);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    CHECK(grid.p(i) >= 0.0);
    CHECK(grid.p(i) <= 1.0);
    if (i > 0) CHECK(grid.p(i) <= grid.p(i - 1));
  }
}

TEST_CASE("ODE spectrum agrees with Landau-Zener where the formula holds") {
  // The asymptotic formula assumes an infinitely long ramp; the ramp here
  // stops at g = 0, which leaves a floor p ~ sin^2 k / (16 tau^2). The
  // comparison is made at k sqrt(tau) <= 0.5 where that floor is negligible.
  const double tau = 16;
  const RampSpec ramp = RampSpec::linear(tau);
  const double phi0 = extract_excitation(evolve_mode(1e-6, ramp)).phi;
  for (double x : {0.1, 0.25, 0.4, 0.5}) {
    const double k = x / std::sqrt(tau);
    const Excitation ex = extract_excitation(evolve_mode(k, ramp));
    CHECK(ex.p == doctest::Approx(std::exp(-2 * kPi * tau * k * k)).epsilon(0.03));
    double dphi = ex.phi - phi0;
    dphi -= 2 * kPi * std::round(dphi / (2 * kPi));
    CHECK(dphi == doctest::Approx(k * k * tau * std::log(tau)).epsilon(0.05));
  }
}

TEST_CASE("waiting plateau: dephasing shift and exact propagation") {
  const PhaseShift s = dephasing_shift(RampSpec::waiting(16, 0.5, 3));
  CHECK(s.a == doctest::Approx(6.0));
  CHECK(s.b == doctest::Approx(6.0));
  const PhaseShift z = dephasing_shift(RampSpec::waiting(16, 0.5, 0));
  CHECK(z.a == 0.0);
  CHECK(z.b == 0.0);
  const PhaseShift h = dephasing_shift(RampSpec::waiting(16, 0.25, 2));
  CHECK(h.a == doctest::Approx(6.0));
  CHECK(h.b == doctest::Approx(4.0 / 3.0));
  RampSpec bad = RampSpec::waiting(16, 0.5, 1);
  bad.g_w = 1.0;
  CHECK_THROWS_AS(dephasing_shift(bad), std::invalid_argument);
  CHECK_THROWS_AS(dephasing_shift(RampSpec::linear(16)), std::invalid_argument);

  // Plateau propagated analytically equals brute-force integration of a
  // frozen Hamiltonian: with w = 0 the waiting ramp is the linear ramp.
  const double k = 0.1;
  const ModeState lin = evolve_mode(k, RampSpec::linear(8));
  const ModeState w0 = evolve_mode(k, RampSpec::waiting(8, 0.5, 0));
  CHECK(std::abs(lin.u - w0.u) < 1e-9);
  CHECK(std::abs(lin.v - w0.v) < 1e-9);

  // Waiting leaves p_k nearly unchanged (the corners of g(t) excite at
  // order 1/tau^2) and adds the predicted k^2 phase.
  const double tau = 16;
  const RampSpec wait = RampSpec::waiting(tau, 0.5, 2);
  const Excitation a0 = extract_excitation(evolve_mode(1e-6, RampSpec::linear(tau)));
  const Excitation b0 = extract_excitation(evolve_mode(1e-6, wait));
  const double kk = 0.05;
  const Excitation a = extract_excitation(evolve_mode(kk, RampSpec::linear(tau)));
  const Excitation b = extract_excitation(evolve_mode(kk, wait));
  CHECK(b.p == doctest::Approx(a.p).epsilon(1e-2));
  double extra = (b.phi - b0.phi) - (a.phi - a0.phi);
  extra -= 2 * kPi * std::round(extra / (2 * kPi));
  const PhaseShift sh = dephasing_shift(wait);
  CHECK(extra == doctest::Approx(sh.b * tau * kk * kk).epsilon(0.05));
}

TEST_CASE("sudden quench spectrum from deep in the paramagnet") {
  const ModeSpectrum s = sudden_quench_spectrum(1e8, 64);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    CHECK(s.p(i) == doctest::Approx(std::pow(std::cos(s.k(i) / 2), 2)).epsilon(1e-7));
    CHECK(s.phi(i) == 0.0);
  }
  CHECK_THROWS_AS(sudden_quench_spectrum(0.0, 8), std::invalid_argument);
}

TEST_CASE("quadrature grid resolves the dynamical phase") {
  CHECK(quadrature_points(16) == 4096);
  const PhaseShift big{0.0, 20.0};
  const int m = quadrature_points(64, big);
  const double k_env = std::sqrt(46 / (2 * kPi * 64));
  const double rate = 2 * (std::log(64.0) + 20) * 64 * k_env;
  CHECK(kPi / m <= 2 * kPi / (32 * rate) + 1e-15);
}
