#include "doctest.h"

#include <cmath>
#include <random>

#include "kzk/errors.hpp"
#include "kzk/observables.hpp"
#include "kzk/oracle_ed.hpp"

using namespace kzk;

namespace {

Eigen::VectorXcd random_vector(Eigen::Index dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v;
}

// prod sx flips every spin.
Eigen::VectorXcd flip_all(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  const Eigen::Index mask = v.size() - 1;
  for (Eigen::Index x = 0; x < v.size(); ++x) out(x ^ mask) = v(x);
  return out;
}

}  // namespace

TEST_CASE("Hamiltonian basics") {
  CHECK(ground_state(2, 0.0).amplitudes.size() == 4);
  CHECK(energy(ground_state(2, 0.0), 0.0) == doctest::Approx(-2.0));
  CHECK(energy(ground_state(8, 0.0), 0.0) == doctest::Approx(-8.0));

  ChainHamiltonian h(8, 0.7);
  const Eigen::VectorXcd x = random_vector(h.dimension(), 1);
  const Eigen::VectorXcd y = random_vector(h.dimension(), 2);
  Eigen::VectorXcd hx, hy, hfx;
  h.apply(x, hx);
  h.apply(y, hy);
  CHECK(std::abs(x.dot(hy) - hx.dot(y)) < 1e-10 * hx.norm() * y.norm());

  h.apply(flip_all(x), hfx);
  CHECK((hfx - flip_all(hx)).norm() < 1e-12 * hx.norm());

  CHECK_THROWS_AS(ChainHamiltonian(16, 1.0), ResourceError);
  CHECK_THROWS_AS(ChainHamiltonian(7, 1.0), std::invalid_argument);
}

TEST_CASE("ground state at large field matches the free-fermion energy") {
  // Even sector, antiperiodic momenta: E0 = -sum_k eps_k / 2 with eps_k = 2 sqrt(...).
  const int n = 10;
  const double g = 1.3;
  double e0 = 0;
  const Eigen::ArrayXd ks = momentum_grid(n);
  for (Eigen::Index i = 0; i < ks.size(); ++i) e0 -= dispersion(g, ks(i)) / 2;
  const SpinState gs = ground_state(n, g);
  CHECK(energy(gs, g) == doctest::Approx(e0).epsilon(1e-10));
  CHECK(parity(gs) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kink statistics of simple states") {
  const int n = 10;
  SpinState product{n, Eigen::VectorXcd::Constant(Eigen::Index(1) << n, std::pow(2.0, -n / 2.0))};
  const KinkMeasurement m = measure_kinks(product);
  CHECK(m.density == doctest::Approx(0.5));
  for (int len = 0; len < n; ++len) CHECK(m.efp[len] == doctest::Approx(std::pow(2.0, -len)));

  const KinkMeasurement ferro = measure_kinks(ground_state(n, 0.0));
  CHECK(ferro.density == doctest::Approx(0.0).epsilon(1e-12));
  for (int len = 0; len <= n; ++len) CHECK(ferro.efp[len] == doctest::Approx(1.0));
}

TEST_CASE("slow ramp is adiabatic") {
  const int n = 8;
  // A short start keeps the run cheap; the gap at N = 8 stays open.
  const SpinState end = evolve_spin(n, RampSpec::linear(30.0, 3.0), OdeOptions{1e-8, 1e-10});
  const SpinState target = ground_state(n, 0.0);
  CHECK(std::norm(target.amplitudes.dot(end.amplitudes)) > 0.999);
  CHECK(std::abs(parity(end) - 1) < 1e-7);
}

TEST_CASE("energy is continuous and conserved on the waiting plateau") {
  const int n = 8;
  const RampSpec ramp = RampSpec::waiting(1.0, 0.5, 3.0);
  const SpinState start = ground_state(n, ramp.g_start);
  const double tb = ramp.plateau_begin(), te = ramp.plateau_end(), h = 1e-4;
  const SpinState before = evolve_spin_between(start, ramp, ramp.t_start(), tb - h);
  const SpinState at_begin = evolve_spin_between(before, ramp, tb - h, tb);
  const SpinState after = evolve_spin_between(at_begin, ramp, tb, tb + h);
  const SpinState at_end = evolve_spin_between(after, ramp, tb + h, te);
  const double e_begin = energy(at_begin, ramp.g_w);
  CHECK(std::abs(energy(before, ramp_value(ramp, tb - h)) - e_begin) < 1e-3);
  CHECK(std::abs(energy(after, ramp.g_w) - e_begin) < 1e-9);
  CHECK(std::abs(energy(at_end, ramp.g_w) - e_begin) < 1e-9);
  CHECK_THROWS_AS(evolve_spin_between(start, ramp, te, tb), std::invalid_argument);
}

TEST_CASE("spin-basis and free-fermion pipelines agree") {
  struct Case {
    int n;
    RampSpec ramp;
  };
  for (const Case& c : {Case{8, RampSpec::linear(1.0)}, Case{10, RampSpec::linear(0.5)},
                        Case{8, RampSpec::waiting(1.0, 0.5, 2.0)}}) {
    const SpinState state = evolve_spin(c.n, c.ramp);
    CHECK(std::abs(state.amplitudes.norm() - 1) < 1e-9);
    // Parity of the normalized state; the norm drift is checked above.
    CHECK(std::abs(parity(state) / state.amplitudes.squaredNorm() - 1) < 1e-10);
    const KinkMeasurement ed = measure_kinks(state);
    const CorrelatorTable t = freefermion_finite_n(c.n, c.ramp);
    CHECK(std::abs(ed.density - t.density()) < 1e-6);
    for (int r = 1; r < c.n; ++r) CHECK(std::abs(ed.two_kink[r] - mkink_correlator(t, {0, r})) < 1e-6);
    const DistributionSeries pl = domain_distribution(t, c.n / 2);
    const DistributionSeries el = efp(t, c.n / 2);
    for (int len = 1; len <= c.n / 2; ++len) {
      CHECK(std::abs(ed.domain[len] - pl.at(len)) < 1e-6);
      CHECK(std::abs(ed.efp[len] - el.at(len)) < 1e-6);
    }
  }
}
