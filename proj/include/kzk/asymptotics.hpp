#pragma once

// Closed-form asymptotes of E_L and P_L and the fits that pin their
// constants. Lengths enter through r = L / xi_hat.

#include <vector>

#include "kzk/observables.hpp"

namespace kzk {

inline constexpr double kAlphaD = 2.00;
inline constexpr double kBetaPublished = 2.6124;
inline constexpr double kInterpA = 0.3774;
inline constexpr double kInterpB = 0.7352;
inline constexpr double kBeta0 = 0.25;
inline constexpr double kAlphaIntercept = 0.37;

/// beta = -xi_hat int dk/2pi log tau(k), 1 - p_k = (2 - 2 cos k) tau(k) with
/// the Landau-Zener p_k. With `variational` the exact symbol 1 - p_k is
/// replaced by (1 - p_k)^2 + s_k^2 where s_k is the variational band.
double compute_beta(double tau_q, bool variational = false, int points = 1 << 16);

/// alpha_D r e^{-beta r}.
double efp_dephased_tail(double xi_hat, double len, double beta, double alpha_d = kAlphaD);
/// xi_hat P_L = alpha_D beta^2 r e^{-beta r}.
double pl_dephased_tail(double xi_hat, double len, double beta, double alpha_d = kAlphaD);
/// (1 - r) exp(pi r^4 / 6).
double efp_dephased_small(double xi_hat, double len);
/// xi_hat P_L = 2 pi r^2.
double pl_dephased_small(double xi_hat, double len);

/// xi_hat P_L = 2 pi r^2 e^{-beta r} (1 + alpha_D beta^2 a r) / (1 + b r + 2 pi a r^2).
double pl_interpolation(double r, double beta, double a = kInterpA, double b = kInterpB,
                        double alpha_d = kAlphaD);

struct InterpolationFit {
  double a = 0.0;
  double b = 0.0;
  double norm_residual = 0.0;  // int f dr - 1
  double mean_residual = 0.0;  // int r f dr - 1
  int iterations = 0;
};

/// Continuum moments int_0^inf r^n f(r) dr of the interpolation formula.
double interpolation_moment(int n, double beta, double a, double b, double alpha_d = kAlphaD);

/// Solves int f dr = 1 and int r f dr = 1 for (a, b) by Newton iteration.
InterpolationFit refit_interpolation(double beta, double alpha_d = kAlphaD, double a0 = 0.4,
                                     double b0 = 0.7);

struct CoherentValues {
  double efp = 0.0;
  double scaled_pl = 0.0;  // xi_hat P_L
};

/// ln alpha = -beta_0 l/xi_hat + intercept.
double ln_alpha_law(double l_over_xi, double beta0 = kBeta0, double intercept = kAlphaIntercept);

/// E_L = alpha^{1/2} e^{-beta r/2}, xi_hat P_L = alpha^{1/2} beta^2 e^{-beta r/2} / 4.
CoherentValues coherent_tail(double xi_hat, double l, double len, double beta,
                             double beta0 = kBeta0, double intercept = kAlphaIntercept);
/// E_L = (1 - r) exp[r^4 (pi/6 + c^2 xi^3 / 12 l^3)],
/// xi_hat P_L = (2 pi + c^2 xi^3 / l^3) r^2.
CoherentValues coherent_small(double xi_hat, double l, double len);

struct AlphaPoint {
  double tau_q = 0.0;
  double w = 0.0;
  double l_over_xi = 0.0;
  double ln_alpha = 0.0;
};

struct AlphaLawFit {
  double beta0 = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  /// Largest |residual| as a fraction of the fitted ln alpha range.
  double spread = 0.0;
};

/// ln alpha from ln Det T = 2 ln E_L by averaging 2 ln E_L + beta r over
/// r_lo <= r <= r_hi.
double ln_alpha_from_efp(const DistributionSeries& el, double xi_hat, double beta,
                         double r_lo = 2.0, double r_hi = 4.0);

/// Least-squares line ln alpha = -beta0 l/xi_hat + intercept. Needs at least
/// three points with distinct l/xi_hat.
AlphaLawFit fit_alpha_law(const std::vector<AlphaPoint>& points);

struct SlopeFit {
  double rate = 0.0;  // decay rate in units of 1/xi_hat
  double intercept = 0.0;
  double rms = 0.0;
  int points = 0;
};

/// Fits ln(value) - power ln r = intercept - rate r over r_lo <= r <= r_hi.
SlopeFit fit_log_slope(const DistributionSeries& series, double xi_hat, double r_lo, double r_hi,
                       double power = 0.0);

struct PrefactorFit {
  double alpha_d = 0.0;      // r -> infinity limit
  double inverse_r = 0.0;    // coefficient of the 1/r correction
  double window_mean = 0.0;  // plain average of E_L e^{beta r} / r over the window
  double rms = 0.0;
};

/// Refits alpha_D from exact data as E_L e^{beta r} / r = alpha_D + c / r over
/// r_lo <= r <= r_hi. The 1/r term absorbs the leading correction to the
/// asymptote, which is still about 15% at r = 3.
PrefactorFit fit_dephased_prefactor(const DistributionSeries& el, double xi_hat, double beta,
                                   double r_lo = 4.0, double r_hi = 8.0);

}  // namespace kzk
