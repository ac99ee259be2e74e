#pragma once

// Brute-force spin-chain oracle: the periodic transverse-field Ising chain
// H = -sum_n (g sx_n + sz_n sz_{n+1}) on all 2^N basis states, plus the
// finite-N free-fermion tables it is compared against.

#include <Eigen/Core>

#include <vector>

#include "kzk/bdg.hpp"
#include "kzk/correlators.hpp"

namespace kzk {

inline constexpr int kMaxOracleSites = 14;

/// Amplitudes in the sz product basis; bit n of the index set means spin n
/// points down.
struct SpinState {
  int sites = 0;
  Eigen::VectorXcd amplitudes;
};

/// Matrix-free Hamiltonian at fixed field.
class ChainHamiltonian {
 public:
  /// Throws ResourceError above kMaxOracleSites, invalid_argument for odd or
  /// too small N.
  ChainHamiltonian(int sites, double g);

  int sites() const { return sites_; }
  double field() const { return g_; }
  void set_field(double g) { g_ = g; }
  Eigen::Index dimension() const { return Eigen::Index(1) << sites_; }
  /// out = H in.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

 private:
  int sites_;
  double g_;
  Eigen::ArrayXd bond_energy_;  // -sum sz sz per basis state
};

/// Ground state in the even-parity sector by Lanczos from the uniform state.
SpinState ground_state(int sites, double g);

/// Schroedinger evolution along the whole ramp from the ground state at
/// g_start, ending at g = 0.
SpinState evolve_spin(const SpinState& initial, const RampSpec& ramp, const OdeOptions& opt = {});
SpinState evolve_spin(int sites, const RampSpec& ramp, const OdeOptions& opt = {});
/// Evolution over t0 <= t <= t1 inside the ramp, starting from `initial` at t0.
SpinState evolve_spin_between(const SpinState& initial, const RampSpec& ramp, double t0, double t1,
                              const OdeOptions& opt = {});

double energy(const SpinState& state, double g);
/// <prod_n sx_n>.
double parity(const SpinState& state);

/// Translation-averaged kink statistics measured on basis-state probabilities.
struct KinkMeasurement {
  int sites = 0;
  double density = 0.0;
  std::vector<double> two_kink;  // C_R = <K_0 K_R>, R = 0..N-1
  std::vector<double> domain;    // P_L, L = 1..N-1 (index 0 unused)
  std::vector<double> efp;       // E_L, L = 0..N
};

KinkMeasurement measure_kinks(const SpinState& state);

/// Correlator table of the N-site chain from discrete momentum sums over the
/// positive half of momentum_grid(N); r_max = N - 1.
CorrelatorTable freefermion_finite_n(int sites, const RampSpec& ramp, const OdeOptions& opt = {});

}  // namespace kzk
