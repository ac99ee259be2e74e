#include "kzk/pairwave.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kzk/correlators.hpp"
#include "kzk/errors.hpp"
#include "kzk/parallel.hpp"
#include "kzk/quadrature.hpp"

namespace kzk {

cplx pair_amplitude(const SpectrumModel& model, double k) {
  const ModePoint pt = evaluate(model, k);
  if (pt.q <= 0.0) {
    std::ostringstream msg;
    msg << "pair_amplitude: pole at k=" << k << " (p_k = 1)";
    throw SingularPoint(msg.str());
  }
  return std::sqrt(pt.p / pt.q) * std::polar(1.0, -pt.phi);
}

cplx pair_pole_residue(const SpectrumModel& model) {
  const double h = 1e-3;
  const cplx f1 = h * pair_amplitude(model, h);
  const cplx f2 = 0.5 * h * pair_amplitude(model, 0.5 * h);
  return (4.0 * f2 - f1) / 3.0;
}

double pair_length(const SpectrumModel& model) {
  if (const auto* lz = std::get_if<LandauZenerModel>(&model)) return kz_length(lz->tau_q);
  const double g = std::get<SuddenQuenchModel>(model).g_initial;
  if (g == 1.0) throw SingularPoint("pair_length: g_initial = 1 has no finite correlation length");
  return 1.0 / std::abs(std::log(g));
}

namespace {

cplx wavefunction_with_residue(const SpectrumModel& model, double n, cplx c0) {
  if (n == 0.0) throw std::invalid_argument("pair_wavefunction: n must be nonzero");
  const int panels = 96 + static_cast<int>(std::ceil(std::abs(n)));
  const auto remainder = [&](double k) { return pair_amplitude(model, k) - c0 / k; };
  const double re = integrate_gl([&](double k) { return remainder(k).real() * std::sin(k * n); },
                                 0.0, kPi, panels, 16);
  const double im = integrate_gl([&](double k) { return remainder(k).imag() * std::sin(k * n); },
                                 0.0, kPi, panels, 16);
  const cplx total = cplx(re, im) + c0 * sine_integral(n * kPi);
  return -2.0 / kPi * total;
}

}  // namespace

cplx pair_wavefunction(const SpectrumModel& model, double n) {
  return wavefunction_with_residue(model, n, pair_pole_residue(model));
}

PairWave pair_wave_series(const SpectrumModel& model, const std::vector<double>& positions) {
  PairWave out;
  if (const auto* lz = std::get_if<LandauZenerModel>(&model)) {
    out.source = "kz-ramp";
    out.parameter = lz->tau_q;
  } else {
    out.source = "sudden";
    out.parameter = std::get<SuddenQuenchModel>(model).g_initial;
  }
  out.length = pair_length(model);
  out.n = positions;
  out.z.resize(positions.size());
  const cplx c0 = pair_pole_residue(model);
  parallel_for(positions.size(),
               [&](std::size_t i) { out.z[i] = wavefunction_with_residue(model, positions[i], c0); });
  return out;
}

}  // namespace kzk
