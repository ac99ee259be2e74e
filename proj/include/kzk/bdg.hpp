#pragma once

// Momentum-space Ising chain: ramps of the transverse field, stationary and
// time-dependent Bogoliubov-de Gennes modes, Landau-Zener spectra.

#include <Eigen/Core>

#include <complex>
#include <utility>
#include <variant>

#include "kzk/ode.hpp"

namespace kzk {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class RampKind { linear, waiting };

/// Transverse-field schedule g(t). Linear: g = -t/tau_q, ending at t = 0.
/// Waiting: same slope down to g_w, hold for w*tau_q, resume to g = 0 at
/// t = w*tau_q.
struct RampSpec {
  RampKind kind = RampKind::linear;
  double tau_q = 16.0;
  double g_w = 0.5;
  double w = 0.0;
  double g_start = 20.0;

  static RampSpec linear(double tau_q, double g_start = 20.0);
  static RampSpec waiting(double tau_q, double g_w, double w, double g_start = 20.0);

  void validate() const;
  double t_start() const { return -g_start * tau_q; }
  double t_end() const { return kind == RampKind::waiting ? wait_time() : 0.0; }
  double wait_time() const { return kind == RampKind::waiting ? w * tau_q : 0.0; }
  double plateau_begin() const { return -g_w * tau_q; }
  double plateau_end() const { return -g_w * tau_q + wait_time(); }

  friend bool operator==(const RampSpec&, const RampSpec&) = default;
};

/// Bogoliubov amplitudes of one +-k pair; the pair state is
/// u* |0> + v* c_{-k}^dag c_k^dag |0>.
struct ModeState {
  cplx u{1.0, 0.0};
  cplx v{0.0, 0.0};
  double k = 0.0;

  double norm_squared() const { return std::norm(u) + std::norm(v); }
};

/// Excitation probability and phase of the kink-pair component at g = 0,
/// with phi measured relative to the ground (kink-vacuum) amplitude.
struct Excitation {
  double p = 0.0;
  double phi = 0.0;
};

/// Extra dynamical phase phi_k -> phi_k + A tau_q + B tau_q k^2.
struct PhaseShift {
  double a = 0.0;
  double b = 0.0;
};

enum class SpectrumOrigin { analytic, ode, sudden };

/// Frozen post-quench description on a midpoint grid k_m = (m - 1/2) pi / M,
/// m = 1..M (the positive half of momentum_grid(2M)).
struct ModeSpectrum {
  double tau_q = 0.0;
  Eigen::ArrayXd k;
  Eigen::ArrayXd p;
  Eigen::ArrayXd phi;
  SpectrumOrigin origin = SpectrumOrigin::analytic;
  PhaseShift shift{};

  Eigen::Index size() const { return k.size(); }
  /// Gauge transformation phi_k -> phi_k + theta.
  ModeSpectrum with_phase_offset(double theta) const;
};

/// Sorted pseudomomenta +-(2m-1) pi / N of the even-parity sector.
Eigen::ArrayXd momentum_grid(int n_sites);
/// Positive midpoint grid with `points` entries in (0, pi).
Eigen::ArrayXd positive_momenta(int points);

double dispersion(double g, double k);

/// Eigenvectors of the stationary BdG matrix: ground has eigenvalue
/// +eps_k, excited -eps_k. Ground = (cos t, sin t) with
/// t = atan2(sin k, g - cos k)/2 taken in [0, pi), so that at g = 0 the
/// ground state is (sin k/2, cos k/2) for every k in (-pi, pi).
std::pair<ModeState, ModeState> stationary_modes(double g, double k);

double ramp_value(const RampSpec& ramp, double t);

/// Integrates the time-dependent BdG equations from the ground state at
/// g_start to the end of the ramp. Waiting plateaus are propagated exactly.
/// `opt.rtol` and `opt.atol` target the final amplitudes: local error
/// accumulates over the ramp, so the per-step tolerances are divided by the
/// ramp duration (see per_step_options).
/// Tolerances for one step of a ramp lasting `duration`.
OdeOptions per_step_options(const OdeOptions& opt, double duration);
ModeState evolve_mode(double k, const RampSpec& ramp, const OdeOptions& opt = {});
ModeState evolve_mode(double k, const RampSpec& ramp, const OdeOptions& opt, OdeStats& stats);

/// Decomposes a normalized state at g = 0 onto the kink vacuum and the
/// two-kink state. p = 0 returns phase 0.
Excitation extract_excitation(const ModeState& state);

PhaseShift dephasing_shift(const RampSpec& ramp);

/// Landau-Zener model: p_k = exp(-2 pi tau_q k^2),
/// phi_k = pi/4 + (2 + A) tau_q + (ln tau_q + B) tau_q k^2.
struct LandauZenerModel {
  double tau_q = 16.0;
  PhaseShift shift{};
};

/// Instantaneous quench from the ground state at g_initial to g = 0.
struct SuddenQuenchModel {
  double g_initial = 2.0;
};

using SpectrumModel = std::variant<LandauZenerModel, SuddenQuenchModel>;

/// Mode data at one momentum; `q` is 1 - p evaluated without cancellation.
struct ModePoint {
  double p = 0.0;
  double q = 1.0;
  double phi = 0.0;
};

ModePoint evaluate(const SpectrumModel& model, double k);

/// Grid size for correlator quadrature: at least `min_points`, and at least
/// 32 points per 2 pi of dynamical phase where p_k exceeds 1e-20.
int quadrature_points(double tau_q, PhaseShift shift = {}, int min_points = 4096);

ModeSpectrum sample(const SpectrumModel& model, int points);
ModeSpectrum lz_spectrum(double tau_q, int points, PhaseShift shift = {});
ModeSpectrum lz_spectrum(double tau_q, const Eigen::ArrayXd& k_grid, PhaseShift shift = {});
ModeSpectrum sudden_quench_spectrum(double g_initial, int points);

/// Spectrum from exact BdG integration of every grid mode (parallel over k).
ModeSpectrum ode_spectrum(const RampSpec& ramp, int points, const OdeOptions& opt = {});

}  // namespace kzk
