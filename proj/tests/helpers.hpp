#pragma once

#include <random>

#include "kzk/correlators.hpp"

namespace kzk::testing {

/// Physical table from a random spectrum on the finite-N grid.
inline CorrelatorTable random_table(int sites, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModeSpectrum s;
  s.k = momentum_grid(sites).tail(sites / 2);
  s.p.resize(sites / 2);
  s.phi.resize(sites / 2);
  for (int i = 0; i < sites / 2; ++i) {
    s.p(i) = u(rng);
    s.phi(i) = 2 * kPi * u(rng);
  }
  s.tau_q = 1.0;
  return build_table(s, sites - 1, false);
}

/// N_R = rho delta_R0, Delta = 0.
inline CorrelatorTable uncorrelated_table(double rho, int r_max) {
  CorrelatorTable t;
  t.tau_q = 1.0;
  t.r_max = r_max;
  t.normal = Eigen::ArrayXd::Zero(r_max + 1);
  t.normal(0) = rho;
  t.anomalous = Eigen::ArrayXcd::Zero(r_max + 1);
  return t;
}

inline Eigen::MatrixXcd random_skew(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = cplx(d(rng), d(rng));
      a(j, i) = -a(i, j);
    }
  return a;
}

}  // namespace kzk::testing
