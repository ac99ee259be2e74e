#pragma once

// Kink pair wave function Z_k = sqrt(p_k/(1-p_k)) e^{-i phi_k} and its
// position representation Z_n = -(2/pi) int_0^pi Z_k sin(kn) dk.

#include <string>
#include <vector>

#include "kzk/bdg.hpp"

namespace kzk {

/// Throws SingularPoint where p_k = 1.
cplx pair_amplitude(const SpectrumModel& model, double k);

/// c0 = lim_{k->0} k Z_k by Richardson extrapolation.
cplx pair_pole_residue(const SpectrumModel& model);

/// The 1/k pole is subtracted, the remainder integrated by composite
/// Gauss-Legendre, and c0 Si(n pi) added back. n must be nonzero.
cplx pair_wavefunction(const SpectrumModel& model, double n);

struct PairWave {
  std::string source;     // "kz-ramp" or "sudden"
  double parameter = 0.0; // tau_q or g_initial
  double length = 0.0;    // xi_hat for ramps, 1/|ln g_initial| for sudden quenches
  std::vector<double> n;
  std::vector<cplx> z;
};

/// Characteristic length used to scale a pair wave: xi_hat for the
/// Landau-Zener model, xi = 1/|ln g_initial| for a sudden quench.
double pair_length(const SpectrumModel& model);

PairWave pair_wave_series(const SpectrumModel& model, const std::vector<double>& positions);

}  // namespace kzk
