#include "kzk/correlators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kzk/errors.hpp"
#include "kzk/parallel.hpp"

namespace kzk {

double kz_length(double tau_q) {
  if (!(tau_q > 0.0)) throw std::invalid_argument("kz_length: tau_q must be positive");
  return 2.0 * kPi * std::sqrt(2.0 * tau_q);
}

double dephasing_length(double tau_q, double b) {
  const double x = 3.0 * (std::log(tau_q) + b) / (4.0 * kPi);
  return kz_length(tau_q) * std::sqrt(1.0 + x * x);
}

KzScales kz_scales(double tau_q, PhaseShift shift) {
  return KzScales{kz_length(tau_q), dephasing_length(tau_q, shift.b), kAnomalousConstant};
}

double kink_density(const ModeSpectrum& spectrum) { return spectrum.p.mean(); }

double normal_correlator(const ModeSpectrum& spectrum, int r) {
  if (r < 0) r = -r;
  return (spectrum.p * (spectrum.k * r).cos()).mean();
}

namespace {

void check_resolution(const ModeSpectrum& s, int r) {
  const Eigen::Index m = s.size();
  if (m < 2) return;
  // sin kR must be sampled at >= 8 points per period.
  const double dk = kPi / static_cast<double>(m);
  if (std::abs(r) * dk > 2.0 * kPi / 8.0) {
    std::ostringstream msg;
    msg << "anomalous_correlator: R=" << r << " unresolved on " << m << " momenta";
    throw AccuracyFailure(msg.str(), std::abs(r) * dk);
  }
  // Dynamical phase: chord between neighbouring unit phasors <= 2 sin(pi/8).
  const double limit = 2.0 * std::sin(kPi / 8.0);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    if (s.p(i) < 1e-20 && s.p(i + 1) < 1e-20) continue;
    const double chord = std::abs(std::polar(1.0, s.phi(i + 1)) - std::polar(1.0, s.phi(i)));
    if (chord > limit) {
      std::ostringstream msg;
      msg << "anomalous_correlator: phase unresolved near k=" << s.k(i) << " (" << m
          << " momenta)";
      throw AccuracyFailure(msg.str(), chord);
    }
  }
}

cplx anomalous_sum(const ModeSpectrum& spectrum, int r) {
  if (r == 0) return 0.0;
  const Eigen::Index m = spectrum.size();
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double p = spectrum.p(i);
    const double amp = std::sqrt(std::max(0.0, p * (1.0 - p)));
    if (amp == 0.0) continue;
    sum += amp * std::polar(1.0, -spectrum.phi(i)) * std::sin(spectrum.k(i) * r);
  }
  return sum / static_cast<double>(m);
}

}  // namespace

cplx anomalous_correlator(const ModeSpectrum& spectrum, int r) {
  check_resolution(spectrum, r);
  return anomalous_sum(spectrum, r);
}

double closed_form_phase(double tau_q, double r, PhaseShift shift) {
  const double lg = std::log(tau_q) + shift.b;
  const double l = dephasing_length(tau_q, shift.b);
  const double arg = std::arg(cplx(1.0, -3.0 * lg / (4.0 * kPi)));
  return 0.25 * kPi + (2.0 + shift.a) * tau_q - 1.5 * arg - 9.0 / 8.0 * (r / l) * (r / l) * lg;
}

cplx anomalous_closed_form(double tau_q, double r, PhaseShift shift) {
  const double xi = kz_length(tau_q);
  const double l = dephasing_length(tau_q, shift.b);
  const double mag = kAnomalousConstant * r / std::sqrt(xi * l * l * l) *
                     std::exp(-1.5 * kPi * (r / l) * (r / l));
  return std::polar(mag, -closed_form_phase(tau_q, r, shift));
}

double variational_band(double tau_q, double k) {
  const double x = tau_q * k * k;
  return 0.95 * std::sqrt(2.0 * kPi) * std::sqrt(x) * std::exp(-4.0 / 3.0 * kPi * x);
}

double CorrelatorTable::N(int r) const {
  const int a = std::abs(r);
  if (a > r_max) {
    std::ostringstream msg;
    msg << "CorrelatorTable: separation " << r << " beyond r_max=" << r_max;
    throw std::out_of_range(msg.str());
  }
  return normal(a);
}

cplx CorrelatorTable::Delta(int r) const {
  const int a = std::abs(r);
  if (a > r_max) {
    std::ostringstream msg;
    msg << "CorrelatorTable: separation " << r << " beyond r_max=" << r_max;
    throw std::out_of_range(msg.str());
  }
  return r < 0 ? -anomalous(a) : anomalous(a);
}

CorrelatorTable CorrelatorTable::dephased() const {
  CorrelatorTable out = *this;
  out.anomalous.setZero();
  return out;
}

void CorrelatorTable::validate() const {
  if (normal.size() != r_max + 1 || anomalous.size() != r_max + 1)
    throw InvariantViolation("table-shape", "arrays do not span R = 0..r_max");
  if (!normal.allFinite() || !anomalous.allFinite())
    throw InvariantViolation("table-finite", "non-finite correlator entry");
  if (anomalous(0) != cplx(0.0))
    throw InvariantViolation("delta-zero", "Delta_0 must vanish");
  const double rho = normal(0);
  if (rho < -1e-12 || rho > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "N_0=" << rho << " outside [0,1]";
    throw InvariantViolation("density-range", msg.str());
  }
  // Gaussian-state bound |Delta_R|^2 <= N_0 (1 - N_0).
  const double bound = rho * (1.0 - rho) + 1e-8;
  for (int r = 1; r <= r_max; ++r) {
    if (std::norm(anomalous(r)) > bound) {
      std::ostringstream msg;
      msg << "|Delta_" << r << "|^2=" << std::norm(anomalous(r)) << " exceeds N_0(1-N_0)=" << bound;
      throw InvariantViolation("anomalous-bound", msg.str());
    }
    if (std::abs(normal(r)) > rho + 1e-8) {
      std::ostringstream msg;
      msg << "|N_" << r << "|=" << std::abs(normal(r)) << " exceeds N_0=" << rho;
      throw InvariantViolation("normal-bound", msg.str());
    }
  }
}

int default_r_max(double tau_q) { return static_cast<int>(std::ceil(4.0 * kz_length(tau_q))); }

CorrelatorTable build_table(const ModeSpectrum& spectrum, int r_max, bool check) {
  if (r_max < 0) throw std::invalid_argument("build_table: r_max must be >= 0");
  CorrelatorTable t;
  t.tau_q = spectrum.tau_q;
  t.r_max = r_max;
  t.shift = spectrum.shift;
  t.method = CorrelatorMethod::quadrature;
  t.normal.resize(r_max + 1);
  t.anomalous.resize(r_max + 1);
  if (check) check_resolution(spectrum, r_max);
  parallel_for(static_cast<std::size_t>(r_max + 1), [&](std::size_t r) {
    t.normal(r) = normal_correlator(spectrum, static_cast<int>(r));
    t.anomalous(r) = anomalous_sum(spectrum, static_cast<int>(r));
  });
  return t;
}

CorrelatorTable closed_form_table(double tau_q, int r_max, PhaseShift shift) {
  if (r_max < 0) throw std::invalid_argument("closed_form_table: r_max must be >= 0");
  CorrelatorTable t;
  t.tau_q = tau_q;
  t.r_max = r_max;
  t.shift = shift;
  t.method = CorrelatorMethod::closed_form;
  t.normal.resize(r_max + 1);
  t.anomalous.resize(r_max + 1);
  const double xi = kz_length(tau_q);
  for (int r = 0; r <= r_max; ++r) {
    t.normal(r) = std::exp(-kPi * (r / xi) * (r / xi)) / xi;
    t.anomalous(r) = r == 0 ? cplx(0.0) : anomalous_closed_form(tau_q, r, shift);
  }
  return t;
}

}  // namespace kzk
