#include "kzk/asymptotics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kzk/errors.hpp"
#include "kzk/quadrature.hpp"

namespace kzk {

namespace {

// log tau(k) without the 0/0 at small k.
double log_symbol(double tau_q, double k, bool variational) {
  const double x = 2.0 * kPi * tau_q * k * k;
  const double xi = kz_length(tau_q);
  if (!variational && k < 1e-3 / xi) return std::log(2.0 * kPi * tau_q) - 0.5 * x + k * k / 12.0;
  const double one_minus_p = -std::expm1(-x);
  double symbol = one_minus_p;
  if (variational) {
    const double s = variational_band(tau_q, k);
    symbol = one_minus_p * one_minus_p + s * s;
  }
  const double sh = std::sin(0.5 * k);
  return std::log(symbol) - std::log(4.0 * sh * sh);
}

}  // namespace

double compute_beta(double tau_q, bool variational, int points) {
  if (!(tau_q >= 4.0)) throw std::invalid_argument("compute_beta: tau_q must be at least 4");
  const int order = 16;
  const int panels = std::max(1, points / order);
  const double integral =
      integrate_gl([&](double k) { return log_symbol(tau_q, k, variational); }, 0.0, kPi, panels,
                   order);
  if (!std::isfinite(integral)) throw AccuracyFailure("compute_beta: non-finite quadrature", integral);
  return -kz_length(tau_q) * integral / kPi;
}

double efp_dephased_tail(double xi_hat, double len, double beta, double alpha_d) {
  const double r = len / xi_hat;
  return alpha_d * r * std::exp(-beta * r);
}

double pl_dephased_tail(double xi_hat, double len, double beta, double alpha_d) {
  const double r = len / xi_hat;
  return alpha_d * beta * beta * r * std::exp(-beta * r);
}

double efp_dephased_small(double xi_hat, double len) {
  const double r = len / xi_hat;
  return (1.0 - r) * std::exp(kPi * r * r * r * r / 6.0);
}

double pl_dephased_small(double xi_hat, double len) {
  const double r = len / xi_hat;
  return 2.0 * kPi * r * r;
}

double pl_interpolation(double r, double beta, double a, double b, double alpha_d) {
  return 2.0 * kPi * r * r * std::exp(-beta * r) * (1.0 + alpha_d * beta * beta * a * r) /
         (1.0 + b * r + 2.0 * kPi * a * r * r);
}

double interpolation_moment(int n, double beta, double a, double b, double alpha_d) {
  // e^{-beta r} is below 1e-40 beyond r = 100 / beta.
  const double r_cut = 100.0 / beta;
  return integrate_gl(
      [&](double r) { return std::pow(r, n) * pl_interpolation(r, beta, a, b, alpha_d); }, 0.0,
      r_cut, 400, 16);
}

InterpolationFit refit_interpolation(double beta, double alpha_d, double a0, double b0) {
  auto residual = [&](double a, double b) {
    return Eigen::Vector2d(interpolation_moment(0, beta, a, b, alpha_d) - 1.0,
                           interpolation_moment(1, beta, a, b, alpha_d) - 1.0);
  };
  InterpolationFit fit;
  Eigen::Vector2d x(a0, b0);
  Eigen::Vector2d f = residual(x(0), x(1));
  for (int it = 1; it <= 60; ++it) {
    fit.iterations = it;
    Eigen::Matrix2d jac;
    for (int c = 0; c < 2; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(c)));
      Eigen::Vector2d xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      jac.col(c) = (residual(xp(0), xp(1)) - residual(xm(0), xm(1))) / (2.0 * h);
    }
    Eigen::Vector2d step = jac.fullPivLu().solve(-f);
    // Damped update keeps a, b positive.
    double lambda = 1.0;
    Eigen::Vector2d trial = x + step;
    while ((trial.array() <= 0.0).any() && lambda > 1e-4) {
      lambda *= 0.5;
      trial = x + lambda * step;
    }
    x = trial;
    f = residual(x(0), x(1));
    if (!f.allFinite()) break;
    if (f.cwiseAbs().maxCoeff() < 1e-13) break;
  }
  if (!f.allFinite() || f.cwiseAbs().maxCoeff() > 1e-9) {
    std::ostringstream msg;
    msg << "refit_interpolation: Newton iteration did not converge (residual " << f.transpose()
        << ")";
    throw FitFailure(msg.str());
  }
  fit.a = x(0);
  fit.b = x(1);
  fit.norm_residual = f(0);
  fit.mean_residual = f(1);
  return fit;
}

double ln_alpha_law(double l_over_xi, double beta0, double intercept) {
  return -beta0 * l_over_xi + intercept;
}

CoherentValues coherent_tail(double xi_hat, double l, double len, double beta, double beta0,
                             double intercept) {
  const double r = len / xi_hat;
  const double sqrt_alpha = std::exp(0.5 * ln_alpha_law(l / xi_hat, beta0, intercept));
  const double decay = std::exp(-0.5 * beta * r);
  return CoherentValues{sqrt_alpha * decay, 0.25 * sqrt_alpha * beta * beta * decay};
}

CoherentValues coherent_small(double xi_hat, double l, double len) {
  const double r = len / xi_hat;
  const double c2 = kAnomalousConstant * kAnomalousConstant;
  const double ratio = std::pow(xi_hat / l, 3);
  const double r2 = r * r;
  return CoherentValues{(1.0 - r) * std::exp(r2 * r2 * (kPi / 6.0 + c2 * ratio / 12.0)),
                        (2.0 * kPi + c2 * ratio) * r2};
}

double ln_alpha_from_efp(const DistributionSeries& el, double xi_hat, double beta, double r_lo,
                         double r_hi) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < el.size(); ++i) {
    const double r = el.index[i] / xi_hat;
    if (r < r_lo || r > r_hi) continue;
    if (el.sign[i] <= 0) throw FitFailure("ln_alpha_from_efp: non-positive E_L in window");
    sum += 2.0 * el.log_abs[i] + beta * r;
    ++count;
  }
  if (count == 0) throw FitFailure("ln_alpha_from_efp: no E_L values in the window");
  return sum / count;
}

AlphaLawFit fit_alpha_law(const std::vector<AlphaPoint>& points) {
  if (points.size() < 3) throw FitFailure("fit_alpha_law: need at least three points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = -points[static_cast<std::size_t>(i)].l_over_xi;
    design(i, 1) = 1.0;
    y(i) = points[static_cast<std::size_t>(i)].ln_alpha;
  }
  if (design.col(0).maxCoeff() - design.col(0).minCoeff() < 1e-12)
    throw FitFailure("fit_alpha_law: l/xi_hat values are not distinct");
  const Eigen::Vector2d c = design.colPivHouseholderQr().solve(y);
  AlphaLawFit fit;
  fit.beta0 = c(0);
  fit.intercept = c(1);
  const Eigen::VectorXd res = y - design * c;
  fit.rms = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  const Eigen::VectorXd model = design * c;
  const double range = model.maxCoeff() - model.minCoeff();
  fit.spread = range > 0.0 ? res.cwiseAbs().maxCoeff() / range : 0.0;
  return fit;
}

SlopeFit fit_log_slope(const DistributionSeries& series, double xi_hat, double r_lo, double r_hi,
                       double power) {
  std::vector<double> rs, ys;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double r = series.index[i] / xi_hat;
    if (r < r_lo || r > r_hi) continue;
    if (series.sign[i] <= 0) throw FitFailure("fit_log_slope: non-positive value in window");
    rs.push_back(r);
    ys.push_back(series.log_abs[i] - power * std::log(r));
  }
  if (rs.size() < 2) throw FitFailure("fit_log_slope: fewer than two points in window");
  const auto n = static_cast<Eigen::Index>(rs.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = rs[static_cast<std::size_t>(i)];
    design(i, 1) = 1.0;
    y(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d c = design.colPivHouseholderQr().solve(y);
  SlopeFit fit;
  fit.rate = -c(0);
  fit.intercept = c(1);
  fit.rms = std::sqrt((y - design * c).squaredNorm() / static_cast<double>(n));
  fit.points = static_cast<int>(n);
  return fit;
}

PrefactorFit fit_dephased_prefactor(const DistributionSeries& el, double xi_hat, double beta,
                                   double r_lo, double r_hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < el.size(); ++i) {
    const double r = el.index[i] / xi_hat;
    if (r < r_lo || r > r_hi) continue;
    if (el.sign[i] <= 0) throw FitFailure("fit_dephased_prefactor: non-positive value in window");
    xs.push_back(1.0 / r);
    ys.push_back(std::exp(el.log_abs[i] + beta * r) / r);
  }
  if (xs.size() < 2) throw FitFailure("fit_dephased_prefactor: fewer than two points in window");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = xs[static_cast<std::size_t>(i)];
    y(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d c = design.colPivHouseholderQr().solve(y);
  PrefactorFit fit;
  fit.alpha_d = c(0);
  fit.inverse_r = c(1);
  fit.window_mean = y.mean();
  fit.rms = std::sqrt((y - design * c).squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace kzk
