#include "commands.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "kzk/asymptotics.hpp"
#include "kzk/errors.hpp"
#include "kzk/oracle_ed.hpp"
#include "kzk/pairwave.hpp"
#include "kzk/pfaffian.hpp"

namespace kzk::cli {

using nlohmann::json;

void RunConfig::validate() const {
  auto positive = [](const std::vector<double>& v, const char* what) {
    for (double x : v)
      if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " values must be positive");
  };
  positive(tau_q, "--tau-q");
  for (double w : wait_w)
    if (!(w >= 0.0)) throw std::invalid_argument("--wait-w values must be non-negative");
  for (double e : epsilon)
    if (e == 0.0 || e <= -1.0) throw std::invalid_argument("--epsilon values must be nonzero and above -1");
  if (!(g_w > 0.0 && g_w < 1.0)) throw std::invalid_argument("--g-w must lie in (0, 1)");
  if (k_points < 0 || r_max < 0 || l_max < 0) throw std::invalid_argument("grid sizes must be non-negative");
  if (out.empty()) throw std::invalid_argument("--out must not be empty");
}

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  j["tau_q"] = tau_q;
  j["wait_w"] = wait_w;
  j["epsilon"] = epsilon;
  j["g_w"] = g_w;
  j["method"] = method == SpectrumMethod::analytic ? "analytic" : "ode";
  j["evaluator"] = evaluator == Evaluator::pfaffian ? "pfaffian" : "dephased-det";
  j["k_points"] = k_points;
  j["r_max"] = r_max;
  j["l_max"] = l_max;
  return j;
}

std::vector<double> default_taus(const std::string& command) {
  if (command == "dephasing") return {16.0};
  if (command == "fig3") return {16.0, 64.0, 256.0};
  if (command == "verify") return {4.0, 16.0};
  return {4.0, 16.0, 64.0};
}

namespace {

std::string tag(double x) { return format_number(x); }

std::vector<double> taus_of(const RunConfig& cfg) {
  return cfg.tau_q.empty() ? default_taus(cfg.command) : cfg.tau_q;
}

int grid_points(const RunConfig& cfg, double tau, PhaseShift shift) {
  return cfg.k_points > 0 ? cfg.k_points : quadrature_points(tau, shift);
}

ModeSpectrum spectrum_for(const RunConfig& cfg, const RampSpec& ramp) {
  const PhaseShift shift = ramp.kind == RampKind::waiting ? dephasing_shift(ramp) : PhaseShift{};
  const int points = grid_points(cfg, ramp.tau_q, shift);
  if (cfg.method == SpectrumMethod::ode) return ode_spectrum(ramp, points);
  return lz_spectrum(ramp.tau_q, points, shift);
}

int r_max_for(const RunConfig& cfg, double tau) { return cfg.r_max > 0 ? cfg.r_max : default_r_max(tau); }
int l_max_for(const RunConfig& cfg, double tau) { return cfg.l_max > 0 ? cfg.l_max : default_l_max(tau); }

std::string method_name(const RunConfig& cfg) {
  return cfg.method == SpectrumMethod::analytic ? "analytic" : "ode";
}

DistributionSeries efp_for(const RunConfig& cfg, const CorrelatorTable& t, int l_max) {
  // The determinant path only exists without Delta; otherwise the Pfaffian.
  const bool det = cfg.evaluator == Evaluator::dephased_det;
  bool zero_delta = true;
  for (int r = 1; r <= t.r_max; ++r) zero_delta = zero_delta && t.Delta(r) == cplx(0.0);
  if (det && zero_delta) return efp_dephased(t, l_max);
  return efp(t, l_max, !det);
}

}  // namespace

void cmd_fig1(const RunConfig& cfg, Sink& sink) {
  for (double tau : taus_of(cfg)) {
    const double xi = kz_length(tau);
    const RampSpec ramp = RampSpec::linear(tau);
    const int r_max = r_max_for(cfg, tau);
    const CorrelatorTable t = build_table(spectrum_for(cfg, ramp), r_max);
    t.validate();
    Series s;
    s.name = "fig1_tau" + tag(tau) + "_" + method_name(cfg);
    s.columns = {"R", "R_over_xi", "C_connected", "scaled_C_connected", "scaled_closed_form"};
    s.meta = {{"tau_q", tau}, {"xi_hat", xi}, {"method", method_name(cfg)}, {"density", t.density()}};
    for (int r = 1; r <= r_max; ++r) {
      const double scaled = connected_two_kink(t, r);
      s.add_row({r, r / xi, scaled / (xi * xi), scaled, connected_two_kink_closed_form(tau, r)});
    }
    sink.add(std::move(s));
  }
  // The dephased curve -exp(-2 pi (R/xi)^2) as its own series.
  Series d;
  d.name = "fig1_dephased";
  d.columns = {"R_over_xi", "scaled_C_connected"};
  const double xi = kz_length(16.0);
  for (int i = 0; i <= 400; ++i) {
    const double x = 0.005 * i;
    d.add_row({x, connected_two_kink_dephased_limit(16.0, x * xi)});
  }
  sink.add(std::move(d));
}

void cmd_fig2(const RunConfig& cfg, Sink& sink) {
  const double beta = compute_beta(64.0);
  const InterpolationFit fit = refit_interpolation(beta);
  Series summary;
  summary.name = "fig2_summary";
  summary.columns = {"tau_q", "series", "mean_over_xi", "norm", "identity_residual"};
  summary.meta = {{"beta", beta}, {"alpha_d", kAlphaD}, {"a", fit.a}, {"b", fit.b}};
  for (double tau : taus_of(cfg)) {
    const double xi = kz_length(tau);
    const double l = dephasing_length(tau);
    const int l_max = l_max_for(cfg, tau);
    const CorrelatorTable coh = build_table(spectrum_for(cfg, RampSpec::linear(tau)), l_max + 2);
    coh.validate();
    const CorrelatorTable dep = coh.dephased();
    const DistributionSeries pl_c = domain_distribution(coh, l_max);
    const DistributionSeries pl_d = domain_distribution(dep, l_max);
    const DistributionSeries el_c = efp_for(cfg, coh, l_max + 1);
    const DistributionSeries el_d = efp_for(cfg, dep, l_max + 1);

    Series pl;
    pl.name = "fig2_pl_tau" + tag(tau);
    pl.columns = {"L",          "r",           "xiP_coherent",  "xiP_dephased",  "dephased_small",
                  "dephased_tail", "interpolation", "coherent_small", "coherent_tail"};
    pl.meta = {{"tau_q", tau}, {"xi_hat", xi}, {"l", l}, {"method", method_name(cfg)}};
    for (int len = 1; len <= l_max; ++len) {
      const double r = len / xi;
      pl.add_row({len, r, xi * pl_c.at(len), xi * pl_d.at(len), pl_dephased_small(xi, len),
                  pl_dephased_tail(xi, len, beta), pl_interpolation(r, beta, fit.a, fit.b),
                  coherent_small(xi, l, len).scaled_pl, coherent_tail(xi, l, len, beta).scaled_pl});
    }
    sink.add(std::move(pl));

    Series el;
    el.name = "fig2_efp_tau" + tag(tau);
    el.columns = {"L", "r", "E_coherent", "E_dephased", "dephased_small", "dephased_tail", "coherent_small",
                  "coherent_tail"};
    el.meta = pl.meta;
    for (int len = 0; len <= l_max + 1; ++len) {
      const double r = len / xi;
      el.add_row({len, r, el_c.at(len), el_d.at(len), efp_dephased_small(xi, len),
                  efp_dephased_tail(xi, len, beta), coherent_small(xi, l, len).efp,
                  coherent_tail(xi, l, len, beta).efp});
    }
    sink.add(std::move(el));

    for (const auto& [name, p, e, table] :
         {std::tuple{"coherent", &pl_c, &el_c, &coh}, std::tuple{"dephased", &pl_d, &el_d, &dep}}) {
      const MeanDomainSize md = mean_domain_size(*p);
      const ConsistencyReport rep = consistency_pl_efp(*p, *e, table->density());
      summary.add_row({tau, name, md.mean / xi, md.norm, rep.max_residual});
    }
  }
  sink.add(std::move(summary));
}

void cmd_fig3(const RunConfig& cfg, Sink& sink) {
  for (double tau : taus_of(cfg)) {
    const LandauZenerModel model{tau};
    const double xi = kz_length(tau);
    const int n_max = static_cast<int>(std::ceil(8.0 * xi));
    std::vector<double> positions;
    for (int n = 1; n <= n_max; ++n) positions.push_back(n);
    const PairWave w = pair_wave_series(model, positions);
    Series s;
    s.name = "fig3_tau" + tag(tau);
    s.columns = {"n", "n_over_xi", "re_Z", "im_Z", "abs_Z", "scaled_abs_Z"};
    s.meta = {{"tau_q", tau}, {"xi_hat", xi}, {"plateau", 2.0 * std::sqrt(kPi) / xi}};
    const double scale = xi / (2.0 * std::sqrt(kPi));
    for (std::size_t i = 0; i < w.n.size(); ++i)
      s.add_row({w.n[i], w.n[i] / xi, w.z[i].real(), w.z[i].imag(), std::abs(w.z[i]), std::abs(w.z[i]) * scale});
    sink.add(std::move(s));

    Series k;
    k.name = "fig3_momentum_tau" + tag(tau);
    k.columns = {"k", "re_Zk", "im_Zk", "abs_Zk", "k_abs_Zk"};
    k.meta = {{"tau_q", tau}, {"pole_residue", std::abs(pair_pole_residue(model))}};
    for (int i = 1; i <= 400; ++i) {
      const double kk = kPi * i / 400.0;
      const cplx z = pair_amplitude(model, kk);
      k.add_row({kk, z.real(), z.imag(), std::abs(z), kk * std::abs(z)});
    }
    sink.add(std::move(k));
  }
}

void cmd_fig4(const RunConfig& cfg, Sink& sink) {
  const std::vector<double> eps = cfg.epsilon.empty() ? std::vector<double>{0.05, -0.05, 0.1, -0.1} : cfg.epsilon;
  for (double e : eps) {
    const SuddenQuenchModel model{1.0 + e};
    const double xi = pair_length(model);
    const int n_max = static_cast<int>(std::ceil(20.0 * xi));
    std::vector<double> positions;
    for (int n = 1; n <= n_max; ++n) positions.push_back(n);
    const PairWave w = pair_wave_series(model, positions);
    Series s;
    s.name = "fig4_g" + tag(1.0 + e);
    s.columns = {"n", "n_over_xi", "re_Z", "im_Z", "abs_Z", "scaled_abs_Z"};
    s.meta = {{"g_initial", 1.0 + e}, {"epsilon", e}, {"xi", xi}};
    for (std::size_t i = 0; i < w.n.size(); ++i)
      s.add_row({w.n[i], w.n[i] / xi, w.z[i].real(), w.z[i].imag(), std::abs(w.z[i]), std::abs(w.z[i]) * xi});
    sink.add(std::move(s));
  }
}

void cmd_dephasing(const RunConfig& cfg, Sink& sink) {
  const std::vector<double> ws =
      cfg.wait_w.empty() ? std::vector<double>{0.0, 2.0, 4.0, 6.0, 8.0, 10.0} : cfg.wait_w;
  const double beta = compute_beta(64.0);
  Series summary;
  summary.name = "dephasing_summary";
  summary.columns = {"tau_q", "w", "A", "B", "l_over_xi", "crossover_r", "efp_rate", "rate_over_beta", "ln_alpha"};
  summary.meta = {{"g_w", cfg.g_w}, {"beta", beta}, {"fit_window", {2.0, 4.0}}};
  for (double tau : taus_of(cfg)) {
    const double xi = kz_length(tau);
    const int l_max = l_max_for(cfg, tau);
    for (double w : ws) {
      const RampSpec ramp = RampSpec::waiting(tau, cfg.g_w, w);
      const PhaseShift shift = dephasing_shift(ramp);
      const CorrelatorTable t = build_table(spectrum_for(cfg, ramp), l_max + 1);
      t.validate();
      const DistributionSeries el = efp_for(cfg, t, l_max + 1);
      const double l = dephasing_length(tau, shift.b);
      const SlopeFit fit = fit_log_slope(el, xi, 2.0, 4.0);
      // Dephased behaviour is expected below L ~ (beta0 / beta) l.
      summary.add_row({tau, w, shift.a, shift.b, l / xi, kBeta0 / beta * l / xi, fit.rate, fit.rate / beta,
                       ln_alpha_from_efp(el, xi, beta)});

      Series ramp_s;
      ramp_s.name = "dephasing_ramp_tau" + tag(tau) + "_w" + tag(w);
      ramp_s.columns = {"t_over_tau", "g"};
      for (int i = 0; i <= 400; ++i) {
        const double t0 = -1.5 * tau, t1 = ramp.t_end();
        const double tt = t0 + (t1 - t0) * i / 400.0;
        ramp_s.add_row({tt / tau, ramp_value(ramp, tt)});
      }
      sink.add(std::move(ramp_s));

      Series s;
      s.name = "dephasing_efp_tau" + tag(tau) + "_w" + tag(w);
      s.columns = {"L", "r", "E", "local_rate_over_beta", "abs_Delta", "coherent_tail", "dephased_tail"};
      s.meta = {{"tau_q", tau}, {"w", w}, {"A", shift.a}, {"B", shift.b}, {"l", l}};
      for (int len = 0; len <= l_max + 1; ++len) {
        const double r = len / xi;
        // -xi d ln E / dL by central differences, in units of beta.
        double local = std::nan("");
        if (len >= 1 && len <= l_max) {
          const double up = el.at(len + 1), down = el.at(len - 1);
          if (up > 0.0 && down > 0.0) local = -xi * 0.5 * (std::log(up) - std::log(down)) / beta;
        }
        s.add_row({len, r, el.at(len), std::isnan(local) ? json(nullptr) : json(local),
                   len <= t.r_max ? std::abs(t.Delta(len)) : 0.0,
                   coherent_tail(xi, l, len, beta).efp, efp_dephased_tail(xi, len, beta)});
      }
      sink.add(std::move(s));
    }
  }
  sink.add(std::move(summary));
}

namespace {

json check(const std::string& name, bool ok, json data) {
  data["name"] = name;
  data["ok"] = ok;
  return data;
}

}  // namespace

json cmd_verify(const RunConfig& cfg) {
  json checks = json::array();

  // Spin-basis ED against the finite-N free-fermion pipeline.
  {
    double worst = 0.0;
    for (int n : {8, 10})
      for (double tau : {0.5, 1.0}) {
        const RampSpec ramp = RampSpec::linear(tau);
        const KinkMeasurement ed = measure_kinks(evolve_spin(n, ramp));
        const CorrelatorTable t = freefermion_finite_n(n, ramp);
        const DistributionSeries pl = domain_distribution(t, n / 2);
        const DistributionSeries el = efp(t, n / 2);
        worst = std::max(worst, std::abs(ed.density - t.density()));
        for (int r = 1; r < n; ++r)
          worst = std::max(worst, std::abs(ed.two_kink[static_cast<std::size_t>(r)] - mkink_correlator(t, {0, r})));
        for (int len = 1; len <= n / 2; ++len) {
          worst = std::max(worst, std::abs(ed.domain[static_cast<std::size_t>(len)] - pl.at(len)));
          worst = std::max(worst, std::abs(ed.efp[static_cast<std::size_t>(len)] - el.at(len)));
        }
      }
    checks.push_back(check("cross-oracle", worst <= 1e-6, {{"max_deviation", worst}, {"tolerance", 1e-6}}));
  }

  // Pf^2 = Det.
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + 2 * trial;
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          a(i, j) = cplx(gauss(rng), gauss(rng));
          a(j, i) = -a(i, j);
        }
      const cplx pf = pfaffian(a);
      const cplx det = a.partialPivLu().determinant();
      worst = std::max(worst, std::abs(pf * pf - det) / std::abs(det));
    }
    checks.push_back(check("pfaffian-squared", worst <= 1e-9, {{"max_relative", worst}, {"tolerance", 1e-9}}));
  }

  // Tables, the P_L / E_L identity and the mean domain size.
  for (double tau : taus_of(cfg)) {
    const double xi = kz_length(tau);
    const int l_max = l_max_for(cfg, tau);
    CorrelatorTable t = build_table(spectrum_for(cfg, RampSpec::linear(tau)), l_max + 2);
    if (cfg.inject_corruption) t.anomalous(3) = cplx(0.0, 2.0 * std::sqrt(t.density()));
    try {
      t.validate();
      checks.push_back(check("table-tau" + tag(tau), true, json::object()));
    } catch (const InvariantViolation& e) {
      checks.push_back(check("table-tau" + tag(tau), false, {{"invariant", e.name()}, {"detail", e.what()}}));
      continue;
    }
    const DistributionSeries pl = domain_distribution(t, l_max);
    const DistributionSeries el = efp(t, l_max + 1);
    const ConsistencyReport rep = consistency_pl_efp(pl, el, t.density());
    checks.push_back(check("pl-efp-identity-tau" + tag(tau), rep.max_residual <= 1e-9,
                           {{"max_residual", rep.max_residual}, {"worst_l", rep.worst_l}, {"tolerance", 1e-9}}));
    const MeanDomainSize md = mean_domain_size(pl);
    checks.push_back(check("mean-domain-tau" + tag(tau), std::abs(md.mean / xi - 1.0) <= 0.01,
                           {{"mean_over_xi", md.mean / xi}, {"norm", md.norm}, {"tolerance", 0.01}}));
  }

  // Fitted constants.
  json constants;
  {
    const double beta = compute_beta(64.0);
    constants["beta"] = {{"value", beta}, {"published", kBetaPublished}, {"residual", beta - kBetaPublished}};
    checks.push_back(check("beta", std::abs(beta - kBetaPublished) <= 5e-4, {{"value", beta}}));

    const double tau = 16.0, xi = kz_length(tau);
    const int l_max = static_cast<int>(std::ceil(8.0 * xi)) + 1;
    const CorrelatorTable dep = build_table(lz_spectrum(tau, quadrature_points(tau)), l_max).dephased();
    const PrefactorFit pf = fit_dephased_prefactor(efp(dep, l_max), xi, beta);
    constants["alpha_d"] = {{"value", pf.alpha_d},
                            {"published", kAlphaD},
                            {"inverse_r", pf.inverse_r},
                            {"window_mean", pf.window_mean},
                            {"rms", pf.rms},
                            {"residual", pf.alpha_d - kAlphaD}};
    const InterpolationFit fit = refit_interpolation(beta);
    constants["interpolation"] = {{"a", fit.a},
                                  {"b", fit.b},
                                  {"published_a", kInterpA},
                                  {"published_b", kInterpB},
                                  {"norm_residual", fit.norm_residual},
                                  {"mean_residual", fit.mean_residual}};
    checks.push_back(check("interpolation-refit",
                           std::abs(fit.a - kInterpA) <= 1e-3 && std::abs(fit.b - kInterpB) <= 1e-3,
                           {{"a", fit.a}, {"b", fit.b}}));
  }

  bool ok = true;
  for (const json& c : checks) ok = ok && c["ok"].get<bool>();
  json report;
  report["ok"] = ok;
  report["checks"] = checks;
  report["constants"] = constants;
  report["config"] = cfg.to_json();
  return report;
}

}  // namespace kzk::cli
