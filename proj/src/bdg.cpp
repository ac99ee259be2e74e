#include "kzk/bdg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kzk/errors.hpp"
#include "kzk/parallel.hpp"

namespace kzk {

RampSpec RampSpec::linear(double tau_q, double g_start) {
  RampSpec r;
  r.kind = RampKind::linear;
  r.tau_q = tau_q;
  r.g_start = g_start;
  r.validate();
  return r;
}

RampSpec RampSpec::waiting(double tau_q, double g_w, double w, double g_start) {
  RampSpec r;
  r.kind = RampKind::waiting;
  r.tau_q = tau_q;
  r.g_w = g_w;
  r.w = w;
  r.g_start = g_start;
  r.validate();
  return r;
}

void RampSpec::validate() const {
  if (!(tau_q > 0.0)) throw std::invalid_argument("ramp: tau_q must be positive");
  if (!(g_start > 1.0)) throw std::invalid_argument("ramp: g_start must exceed the critical field 1");
  if (kind == RampKind::waiting) {
    if (!(g_w > 0.0 && g_w < 1.0)) throw std::invalid_argument("ramp: g_w must lie in (0, 1)");
    if (!(w >= 0.0)) throw std::invalid_argument("ramp: waiting coefficient w must be >= 0");
  }
}

ModeSpectrum ModeSpectrum::with_phase_offset(double theta) const {
  ModeSpectrum out = *this;
  out.phi += theta;
  return out;
}

Eigen::ArrayXd momentum_grid(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0)
    throw std::invalid_argument("momentum_grid: chain length must be even and >= 2");
  Eigen::ArrayXd k(n_sites);
  const int half = n_sites / 2;
  for (int m = 1; m <= half; ++m) {
    const double km = (2.0 * m - 1.0) * kPi / n_sites;
    k(half - m) = -km;
    k(half + m - 1) = km;
  }
  return k;
}

Eigen::ArrayXd positive_momenta(int points) {
  if (points < 1) throw std::invalid_argument("positive_momenta: need at least one point");
  return (Eigen::ArrayXd::LinSpaced(points, 0.5, points - 0.5)) * (kPi / points);
}

double dispersion(double g, double k) { return 2.0 * std::hypot(g - std::cos(k), std::sin(k)); }

std::pair<ModeState, ModeState> stationary_modes(double g, double k) {
  const double a = g - std::cos(k);
  const double b = std::sin(k);
  if (std::hypot(a, b) < 1e-14) {
    std::ostringstream msg;
    msg << "stationary_modes: gap closes at g=" << g << ", k=" << k;
    throw SingularPoint(msg.str());
  }
  double theta = 0.5 * std::atan2(b, a);
  if (theta < 0.0) theta += kPi;
  const double c = std::cos(theta), s = std::sin(theta);
  return {ModeState{c, s, k}, ModeState{s, -c, k}};
}

double ramp_value(const RampSpec& ramp, double t) {
  if (t < ramp.t_start() || t > ramp.t_end()) {
    std::ostringstream msg;
    msg << "ramp_value: t=" << t << " outside [" << ramp.t_start() << ", " << ramp.t_end() << "]";
    throw std::invalid_argument(msg.str());
  }
  if (ramp.kind == RampKind::linear) return -t / ramp.tau_q;
  if (t <= ramp.plateau_begin()) return -t / ramp.tau_q;
  if (t <= ramp.plateau_end()) return ramp.g_w;
  return -(t - ramp.wait_time()) / ramp.tau_q;
}

namespace {

// i d/dt (u, v) = 2 [[g - cos k, sin k], [sin k, cos k - g]] (u, v)
void integrate_linear_segment(double k, double tau_q, double t_shift, double t0, double t1,
                              Eigen::Vector2cd& y, const OdeOptions& opt, OdeStats& stats) {
  const double ck = std::cos(k), sk = std::sin(k);
  const cplx mi(0.0, -1.0);
  auto rhs = [&](double t, const Eigen::Vector2cd& in, Eigen::Vector2cd& out) {
    const double g = -(t - t_shift) / tau_q;
    const double a = 2.0 * (g - ck), b = 2.0 * sk;
    out(0) = mi * (a * in(0) + b * in(1));
    out(1) = mi * (b * in(0) - a * in(1));
  };
  const OdeStats s = integrate_dop853(rhs, t0, t1, y, opt);
  stats.accepted += s.accepted;
  stats.rejected += s.rejected;
  stats.evaluations += s.evaluations;
}

// exp(-i M t) with M^2 = eps^2: cos(eps t) - i sin(eps t) M / eps.
void propagate_frozen(double g, double k, double duration, Eigen::Vector2cd& y) {
  const double a = 2.0 * (g - std::cos(k)), b = 2.0 * std::sin(k);
  const double eps = std::hypot(a, b);
  if (eps == 0.0) return;
  const double c = std::cos(eps * duration), s = std::sin(eps * duration) / eps;
  const cplx mi(0.0, -1.0);
  const Eigen::Vector2cd in = y;
  y(0) = c * in(0) + mi * s * (a * in(0) + b * in(1));
  y(1) = c * in(1) + mi * s * (b * in(0) - a * in(1));
}

}  // namespace

OdeOptions per_step_options(const OdeOptions& opt, double duration) {
  OdeOptions scaled = opt;
  const double span = std::max(1.0, duration);
  scaled.rtol = opt.rtol / span;
  scaled.atol = opt.atol / span;
  return scaled;
}

ModeState evolve_mode(double k, const RampSpec& ramp, const OdeOptions& user_opt, OdeStats& stats) {
  ramp.validate();
  const OdeOptions opt = per_step_options(user_opt, ramp.t_end() - ramp.t_start());
  const ModeState ground = stationary_modes(ramp.g_start, k).first;
  Eigen::Vector2cd y(ground.u, ground.v);
  if (ramp.kind == RampKind::linear) {
    integrate_linear_segment(k, ramp.tau_q, 0.0, ramp.t_start(), 0.0, y, opt, stats);
  } else {
    integrate_linear_segment(k, ramp.tau_q, 0.0, ramp.t_start(), ramp.plateau_begin(), y, opt,
                             stats);
    propagate_frozen(ramp.g_w, k, ramp.wait_time(), y);
    integrate_linear_segment(k, ramp.tau_q, ramp.wait_time(), ramp.plateau_end(), ramp.t_end(), y,
                             opt, stats);
  }
  return ModeState{y(0), y(1), k};
}

ModeState evolve_mode(double k, const RampSpec& ramp, const OdeOptions& opt) {
  OdeStats stats;
  return evolve_mode(k, ramp, opt, stats);
}

Excitation extract_excitation(const ModeState& state) {
  const double n2 = state.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "extract_excitation: state not normalized (|u|^2+|v|^2=" << n2 << ")";
    throw std::invalid_argument(msg.str());
  }
  const double c = std::cos(0.5 * state.k), s = std::sin(0.5 * state.k);
  const cplx excited = c * state.u - s * state.v;
  const cplx ground = s * state.u + c * state.v;
  Excitation out;
  out.p = std::norm(excited);
  if (out.p == 0.0 || std::abs(ground) == 0.0) return out;
  out.phi = std::arg(excited * std::conj(ground));
  return out;
}

PhaseShift dephasing_shift(const RampSpec& ramp) {
  if (ramp.kind != RampKind::waiting) throw std::invalid_argument("dephasing_shift: ramp has no plateau");
  if (!(ramp.g_w < 1.0)) throw std::invalid_argument("dephasing_shift: g_w must be below 1");
  if (!(ramp.g_w > 0.0) || !(ramp.w >= 0.0)) throw std::invalid_argument("dephasing_shift: invalid plateau");
  return PhaseShift{4.0 * ramp.w * (1.0 - ramp.g_w), 2.0 * ramp.w * ramp.g_w / (1.0 - ramp.g_w)};
}

ModePoint evaluate(const SpectrumModel& model, double k) {
  return std::visit(
      [k](const auto& m) -> ModePoint {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LandauZenerModel>) {
          const double x = 2.0 * kPi * m.tau_q * k * k;
          ModePoint pt;
          pt.p = std::exp(-x);
          pt.q = -std::expm1(-x);
          pt.phi = 0.25 * kPi + (2.0 + m.shift.a) * m.tau_q +
                   (std::log(m.tau_q) + m.shift.b) * m.tau_q * k * k;
          return pt;
        } else {
          // Initial ground state (cos t, sin t) projected on the g = 0 basis.
          const ModeState g0 = stationary_modes(m.g_initial, k).first;
          const double angle = std::atan2(g0.v.real(), g0.u.real()) + 0.5 * k;
          const double excited = std::cos(angle), ground = std::sin(angle);
          ModePoint pt;
          pt.p = excited * excited;
          pt.q = ground * ground;
          pt.phi = (excited * ground < 0.0) ? kPi : 0.0;
          return pt;
        }
      },
      model);
}

int quadrature_points(double tau_q, PhaseShift shift, int min_points) {
  const double k_env = std::sqrt(46.0 / (2.0 * kPi * tau_q));
  const double rate = 2.0 * std::abs(std::log(tau_q) + shift.b) * tau_q * std::min(k_env, kPi);
  const double needed = std::ceil(16.0 * rate);
  return std::max(min_points, static_cast<int>(needed));
}

ModeSpectrum sample(const SpectrumModel& model, int points) {
  ModeSpectrum out;
  out.k = positive_momenta(points);
  out.p.resize(points);
  out.phi.resize(points);
  for (int i = 0; i < points; ++i) {
    const ModePoint pt = evaluate(model, out.k(i));
    out.p(i) = pt.p;
    out.phi(i) = pt.phi;
  }
  if (const auto* lz = std::get_if<LandauZenerModel>(&model)) {
    out.tau_q = lz->tau_q;
    out.shift = lz->shift;
    out.origin = SpectrumOrigin::analytic;
  } else {
    out.tau_q = 0.0;
    out.origin = SpectrumOrigin::sudden;
  }
  return out;
}

ModeSpectrum lz_spectrum(double tau_q, int points, PhaseShift shift) {
  return sample(LandauZenerModel{tau_q, shift}, points);
}

ModeSpectrum lz_spectrum(double tau_q, const Eigen::ArrayXd& k_grid, PhaseShift shift) {
  ModeSpectrum out;
  out.tau_q = tau_q;
  out.shift = shift;
  out.k = k_grid;
  out.p.resize(k_grid.size());
  out.phi.resize(k_grid.size());
  const SpectrumModel model = LandauZenerModel{tau_q, shift};
  for (Eigen::Index i = 0; i < k_grid.size(); ++i) {
    const ModePoint pt = evaluate(model, k_grid(i));
    out.p(i) = pt.p;
    out.phi(i) = pt.phi;
  }
  return out;
}

ModeSpectrum sudden_quench_spectrum(double g_initial, int points) {
  if (!(g_initial > 0.0)) throw std::invalid_argument("sudden_quench_spectrum: g_initial must be positive");
  return sample(SuddenQuenchModel{g_initial}, points);
}

ModeSpectrum ode_spectrum(const RampSpec& ramp, int points, const OdeOptions& opt) {
  ramp.validate();
  ModeSpectrum out;
  out.tau_q = ramp.tau_q;
  out.origin = SpectrumOrigin::ode;
  if (ramp.kind == RampKind::waiting) out.shift = dephasing_shift(ramp);
  out.k = positive_momenta(points);
  out.p.resize(points);
  out.phi.resize(points);
  parallel_for(static_cast<std::size_t>(points), [&](std::size_t i) {
    const Excitation ex = extract_excitation(evolve_mode(out.k(i), ramp, opt));
    out.p(i) = ex.p;
    out.phi(i) = ex.phi;
  });
  return out;
}

}  // namespace kzk
