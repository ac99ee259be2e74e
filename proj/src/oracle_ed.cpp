#include "kzk/oracle_ed.hpp"

#include <vector>

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kzk/errors.hpp"

namespace kzk {

namespace {

std::uint32_t rotate_right(std::uint32_t x, int n) {
  const std::uint32_t mask = (std::uint32_t(1) << n) - 1;
  return ((x >> 1) | (x << (n - 1))) & mask;
}

// Bit n of the result is set when bond (n, n+1) carries a kink.
std::uint32_t kink_mask(std::uint32_t x, int n) { return x ^ rotate_right(x, n); }

void check_sites(int sites) {
  if (sites > kMaxOracleSites) {
    std::ostringstream msg;
    msg << "oracle: N=" << sites << " exceeds the cap of " << kMaxOracleSites << " sites";
    throw ResourceError(msg.str());
  }
  if (sites < 2 || sites % 2 != 0) throw std::invalid_argument("oracle: N must be even and >= 2");
}

}  // namespace

ChainHamiltonian::ChainHamiltonian(int sites, double g) : sites_(sites), g_(g) {
  check_sites(sites);
  const Eigen::Index dim = dimension();
  bond_energy_.resize(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const int kinks = std::popcount(kink_mask(static_cast<std::uint32_t>(x), sites));
    bond_energy_(x) = -(sites - 2.0 * kinks);
  }
}

void ChainHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const Eigen::Index dim = dimension();
  out.resize(dim);
  out = (bond_energy_ * in.array()).matrix();
  if (g_ == 0.0) return;
  for (Eigen::Index x = 0; x < dim; ++x) {
    cplx acc = 0.0;
    for (int n = 0; n < sites_; ++n) acc += in(x ^ (Eigen::Index(1) << n));
    out(x) -= g_ * acc;
  }
}

SpinState ground_state(int sites, double g) {
  const ChainHamiltonian h(sites, g);
  const Eigen::Index dim = h.dimension();
  const int max_iter = static_cast<int>(std::min<Eigen::Index>(dim, 300));
  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(static_cast<std::size_t>(max_iter));
  Eigen::VectorXcd q = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  Eigen::VectorXcd w(dim);
  std::vector<double> alpha, beta;
  Eigen::VectorXcd best;
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j < max_iter; ++j) {
    basis.push_back(q);
    h.apply(q, w);
    alpha.push_back(q.dot(w).real());
    // Full reorthogonalization keeps the Krylov basis clean.
    for (const auto& b : basis) w -= b * b.dot(w);
    for (const auto& b : basis) w -= b * b.dot(w);
    const double bn = w.norm();
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double e0 = es.eigenvalues()(0);
    const double resid = bn * std::abs(es.eigenvectors()(m - 1, 0));
    if (resid < 1e-13 || bn < 1e-14 || j + 1 == max_iter || std::abs(e0 - prev) < 1e-15) {
      best = Eigen::VectorXcd::Zero(dim);
      for (int i = 0; i < m; ++i) best += es.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
      break;
    }
    prev = e0;
    beta.push_back(bn);
    q = w / bn;
  }
  best.normalize();
  return SpinState{sites, best};
}

SpinState evolve_spin_between(const SpinState& initial, const RampSpec& ramp, double t0, double t1,
                              const OdeOptions& user_opt) {
  ramp.validate();
  if (!(ramp.t_start() <= t0 && t0 <= t1 && t1 <= ramp.t_end()))
    throw std::invalid_argument("evolve_spin_between: window outside the ramp");
  const OdeOptions opt = per_step_options(user_opt, ramp.t_end() - ramp.t_start());
  ChainHamiltonian h(initial.sites, ramp.g_start);
  Eigen::VectorXcd y = initial.amplitudes;
  const cplx mi(0.0, -1.0);
  auto rhs = [&](double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    // Clamp roundoff at segment ends into the ramp domain.
    const double tc = std::min(std::max(t, ramp.t_start()), ramp.t_end());
    h.set_field(ramp_value(ramp, tc));
    h.apply(in, out);
    out *= mi;
  };
  // Segment boundaries at the kinks of g(t).
  std::vector<double> cuts{t0};
  if (ramp.kind == RampKind::waiting) {
    for (double c : {ramp.plateau_begin(), ramp.plateau_end()})
      if (c > t0 && c < t1) cuts.push_back(c);
  }
  cuts.push_back(t1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) integrate_dop853(rhs, cuts[i], cuts[i + 1], y, opt);
  return SpinState{initial.sites, y};
}

SpinState evolve_spin(const SpinState& initial, const RampSpec& ramp, const OdeOptions& opt) {
  return evolve_spin_between(initial, ramp, ramp.t_start(), ramp.t_end(), opt);
}

SpinState evolve_spin(int sites, const RampSpec& ramp, const OdeOptions& opt) {
  return evolve_spin(ground_state(sites, ramp.g_start), ramp, opt);
}

double energy(const SpinState& state, double g) {
  const ChainHamiltonian h(state.sites, g);
  Eigen::VectorXcd out;
  h.apply(state.amplitudes, out);
  return state.amplitudes.dot(out).real();
}

double parity(const SpinState& state) {
  const Eigen::Index dim = state.amplitudes.size();
  const Eigen::Index all = dim - 1;
  cplx acc = 0.0;
  for (Eigen::Index x = 0; x < dim; ++x) acc += std::conj(state.amplitudes(x)) * state.amplitudes(x ^ all);
  return acc.real();
}

KinkMeasurement measure_kinks(const SpinState& state) {
  const int n = state.sites;
  check_sites(n);
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (state.amplitudes.size() != dim) throw std::invalid_argument("measure_kinks: state size mismatch");
  // Probability of every kink pattern.
  std::vector<double> pattern(static_cast<std::size_t>(dim), 0.0);
  for (Eigen::Index x = 0; x < dim; ++x)
    pattern[kink_mask(static_cast<std::uint32_t>(x), n)] += std::norm(state.amplitudes(x));

  KinkMeasurement m;
  m.sites = n;
  m.two_kink.assign(static_cast<std::size_t>(n), 0.0);
  m.domain.assign(static_cast<std::size_t>(n), 0.0);
  m.efp.assign(static_cast<std::size_t>(n + 1), 0.0);
  const auto bit = [n](std::uint32_t mask, int b) { return (mask >> (((b % n) + n) % n)) & 1u; };
  for (Eigen::Index km = 0; km < dim; ++km) {
    const double pr = pattern[static_cast<std::size_t>(km)];
    if (pr == 0.0) continue;
    const auto mask = static_cast<std::uint32_t>(km);
    for (int j = 0; j < n; ++j) {
      const bool kj = bit(mask, j);
      if (kj) m.density += pr;
      for (int r = 0; r < n; ++r)
        if (kj && bit(mask, j + r)) m.two_kink[static_cast<std::size_t>(r)] += pr;
      // Empty run starting at bond j.
      int run = 0;
      while (run < n && !bit(mask, j + run)) ++run;
      for (int len = 0; len <= run; ++len) m.efp[static_cast<std::size_t>(len)] += pr;
      if (kj && run < n) {
        int len = 1;
        while (len < n && !bit(mask, j + len)) ++len;
        if (len < n) m.domain[static_cast<std::size_t>(len)] += pr;
      }
    }
  }
  const double inv = 1.0 / n;
  m.density *= inv;
  for (auto& v : m.two_kink) v *= inv;
  for (auto& v : m.efp) v *= inv;
  for (auto& v : m.domain) v *= inv / m.density;
  return m;
}

CorrelatorTable freefermion_finite_n(int sites, const RampSpec& ramp, const OdeOptions& opt) {
  if (sites < 2 || sites % 2 != 0)
    throw std::invalid_argument("freefermion_finite_n: N must be even and >= 2");
  ramp.validate();
  const int half = sites / 2;
  ModeSpectrum s;
  s.tau_q = ramp.tau_q;
  s.origin = SpectrumOrigin::ode;
  if (ramp.kind == RampKind::waiting) s.shift = dephasing_shift(ramp);
  s.k = momentum_grid(sites).tail(half);
  s.p.resize(half);
  s.phi.resize(half);
  for (int i = 0; i < half; ++i) {
    const Excitation ex = extract_excitation(evolve_mode(s.k(i), ramp, opt));
    s.p(i) = ex.p;
    s.phi(i) = ex.phi;
  }
  return build_table(s, sites - 1, false);
}

}  // namespace kzk
