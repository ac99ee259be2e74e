#pragma once

// Quadratic kink correlators N_R = <g^dag_{n+R} g_n> and Delta_R = <g_{n+R} g_n>
// of the post-quench Gaussian state, by quadrature and in closed form.

#include <Eigen/Core>

#include "kzk/bdg.hpp"

namespace kzk {

/// 57 sqrt(6 pi) / 80.
inline const double kAnomalousConstant = 57.0 * std::sqrt(6.0 * kPi) / 80.0;

struct KzScales {
  double xi_hat = 0.0;
  double l = 0.0;
  double c_const = kAnomalousConstant;
};

/// xi_hat = 2 pi sqrt(2 tau_q).
double kz_length(double tau_q);
/// l = xi_hat sqrt(1 + (3 (ln tau_q + b) / 4 pi)^2).
double dephasing_length(double tau_q, double b = 0.0);
KzScales kz_scales(double tau_q, PhaseShift shift = {});

/// rho = (1/2pi) int p_k dk; on the midpoint grid this is the mean of p.
double kink_density(const ModeSpectrum& spectrum);
double normal_correlator(const ModeSpectrum& spectrum, int r);
/// Middle-line quadrature (1/pi) int_0^pi sqrt(p(1-p)) e^{-i phi} sin kR dk.
/// Throws AccuracyFailure when the grid resolves fewer than 8 points per
/// oscillation of the integrand.
cplx anomalous_correlator(const ModeSpectrum& spectrum, int r);
/// c R (xi_hat l^3)^{-1/2} exp(-3pi/2 (R/l)^2) exp(-i phi_R) with the
/// waiting-ramp phase shift folded into l and phi_R.
cplx anomalous_closed_form(double tau_q, double r, PhaseShift shift = {});
/// phi_R of the closed form.
double closed_form_phase(double tau_q, double r, PhaseShift shift = {});

/// A sqrt(2pi) (tau_q k^2)^{1/2} exp(-a pi tau_q k^2), A = 19/20, a = 4/3.
double variational_band(double tau_q, double k);

enum class CorrelatorMethod { quadrature, closed_form };

/// N_R and Delta_R for R = 0..r_max. Negative separations are reconstructed
/// from N_{-R} = N_R and Delta_{-R} = -Delta_R.
struct CorrelatorTable {
  double tau_q = 0.0;
  int r_max = 0;
  Eigen::ArrayXd normal;
  Eigen::ArrayXcd anomalous;
  CorrelatorMethod method = CorrelatorMethod::quadrature;
  PhaseShift shift{};

  double density() const { return normal(0); }
  double N(int r) const;
  cplx Delta(int r) const;
  /// Same table with every Delta_R set to zero.
  CorrelatorTable dephased() const;
  /// Throws InvariantViolation on a non-physical table.
  void validate() const;
};

int default_r_max(double tau_q);

/// With `check_resolution` false the grid sums are taken as they are, which
/// is the exact finite-chain result when the grid is momentum_grid(N).
CorrelatorTable build_table(const ModeSpectrum& spectrum, int r_max, bool check_resolution = true);
CorrelatorTable closed_form_table(double tau_q, int r_max, PhaseShift shift = {});

}  // namespace kzk
