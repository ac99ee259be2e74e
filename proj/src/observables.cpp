#include "kzk/observables.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kzk/errors.hpp"
#include "kzk/parallel.hpp"

namespace kzk {

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::domain_size: return "domain-size";
    case SeriesKind::efp: return "efp";
    case SeriesKind::connected_2: return "connected-2";
    case SeriesKind::connected_3: return "connected-3";
    case SeriesKind::mkink: return "mkink";
  }
  return "unknown";
}

double DistributionSeries::value(std::size_t i) const {
  if (sign[i] == 0) return 0.0;
  return sign[i] * std::exp(log_abs[i]);
}

double DistributionSeries::at(int label) const {
  const auto it = std::find(index.begin(), index.end(), label);
  if (it == index.end()) {
    std::ostringstream msg;
    msg << "series has no entry for index " << label;
    throw std::out_of_range(msg.str());
  }
  return value(static_cast<std::size_t>(it - index.begin()));
}

void DistributionSeries::push_back(int label, double log_magnitude, int s) {
  index.push_back(label);
  log_abs.push_back(log_magnitude);
  sign.push_back(s);
}

void DistributionSeries::push_value(int label, double v) {
  if (v == 0.0)
    push_back(label, -std::numeric_limits<double>::infinity(), 0);
  else
    push_back(label, std::log(std::abs(v)), v < 0.0 ? -1 : 1);
}

double real_pfaffian(const LogPfaffian<cplx>& pf, const std::string& what, double tol) {
  if (pf.is_zero()) return 0.0;
  const double im = pf.phase.imag();
  // A 1e-14 absolute floor keeps roundoff on exponentially small values from
  // tripping the check.
  if (std::abs(im) > tol && std::abs(im) * std::exp(pf.log_abs) > 1e-14) {
    std::ostringstream msg;
    msg << what << ": Pfaffian has relative imaginary part " << im;
    throw InvariantViolation("pfaffian-real", msg.str());
  }
  return pf.phase.real() >= 0.0 ? std::exp(pf.log_abs) : -std::exp(pf.log_abs);
}

namespace {

// Log-magnitude and sign of a real Pfaffian, for storing in a series.
std::pair<double, int> real_log(const LogPfaffian<cplx>& pf, const std::string& what) {
  if (pf.is_zero()) return {-std::numeric_limits<double>::infinity(), 0};
  (void)real_pfaffian(pf, what);
  return {pf.log_abs, pf.phase.real() >= 0.0 ? 1 : -1};
}

}  // namespace

double mkink_correlator(const CorrelatorTable& table, const std::vector<int>& bonds) {
  return real_pfaffian(assemble_mkink(table, bonds).log_pfaffian(), "mkink_correlator");
}

double mkink_correlator_dephased(const CorrelatorTable& table, const std::vector<int>& bonds) {
  const auto m = static_cast<Eigen::Index>(bonds.size());
  // Reuse the assembly checks.
  (void)assemble_mkink(table, bonds);
  Eigen::MatrixXd nn(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) nn(i, j) = table.N(bonds[i] - bonds[j]);
  return nn.determinant();
}

double connected_two_kink(const CorrelatorTable& table, int r) {
  if (r < 1) throw std::invalid_argument("connected_two_kink: R must be >= 1");
  const double xi = kz_length(table.tau_q);
  const double rho = table.density();
  return xi * xi * (mkink_correlator(table, {r, 0}) - rho * rho);
}

double connected_two_kink_closed_form(double tau_q, double r, PhaseShift shift) {
  const double xi = kz_length(tau_q);
  const double l = dephasing_length(tau_q, shift.b);
  const double c = kAnomalousConstant;
  return c * c * (xi / l) * (r / l) * (r / l) * std::exp(-3.0 * kPi * (r / l) * (r / l)) -
         std::exp(-2.0 * kPi * (r / xi) * (r / xi));
}

double connected_two_kink_dephased_limit(double tau_q, double r) {
  const double xi = kz_length(tau_q);
  return -std::exp(-2.0 * kPi * (r / xi) * (r / xi));
}

double connected_three_kink(const CorrelatorTable& table, int m1, int m2, int m3) {
  const double rho = table.density();
  const double c123 = mkink_correlator(table, {m1, m2, m3});
  const double c12 = mkink_correlator(table, {m1, m2}) - rho * rho;
  const double c23 = mkink_correlator(table, {m2, m3}) - rho * rho;
  const double c31 = mkink_correlator(table, {m3, m1}) - rho * rho;
  return c123 - rho * rho * rho - rho * (c12 + c23 + c31);
}

int default_l_max(double tau_q) { return static_cast<int>(std::ceil(4.0 * kz_length(tau_q))); }

DistributionSeries domain_distribution(const CorrelatorTable& table, int l_max) {
  if (l_max < 1) throw std::invalid_argument("domain_distribution: l_max must be >= 1");
  if (l_max > table.r_max) {
    std::ostringstream msg;
    msg << "domain_distribution: l_max=" << l_max << " exceeds table range " << table.r_max;
    throw std::invalid_argument(msg.str());
  }
  const double rho = table.density();
  if (!(rho > 0.0)) throw std::invalid_argument("domain_distribution: kink density is zero");
  std::vector<std::pair<double, int>> vals(static_cast<std::size_t>(l_max));
  parallel_for(vals.size(), [&](std::size_t i) {
    const int len = static_cast<int>(i) + 1;
    const LogPfaffian<cplx> pf = assemble_domain(table, len).log_pfaffian();
    vals[i] = real_log(pf, "domain_distribution");
  });
  DistributionSeries s;
  s.kind = SeriesKind::domain_size;
  s.tau_q = table.tau_q;
  s.shift = table.shift;
  s.dephased = (table.anomalous.abs() == 0.0).all();
  const double log_rho = std::log(rho);
  for (int len = 1; len <= l_max; ++len) {
    const auto& v = vals[static_cast<std::size_t>(len - 1)];
    s.push_back(len, v.first - log_rho, v.second);
  }
  return s;
}

DistributionSeries efp_dephased(const CorrelatorTable& table, int l_max) {
  if (l_max < 1) throw std::invalid_argument("efp: l_max must be >= 1");
  if (l_max - 1 > table.r_max) throw std::invalid_argument("efp: l_max exceeds table range");
  const Eigen::Index l = l_max;
  Eigen::MatrixXd a(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j)
      a(i, j) = (i == j ? 1.0 : 0.0) - table.N(static_cast<int>(i - j));
  DistributionSeries s;
  s.kind = SeriesKind::efp;
  s.tau_q = table.tau_q;
  s.shift = table.shift;
  s.dephased = true;
  s.push_back(0, 0.0, 1);
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    const Eigen::MatrixXd& f = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l; ++i) {
      acc += 2.0 * std::log(f(i, i));
      s.push_back(static_cast<int>(i + 1), acc, 1);
    }
    return s;
  }
  // Not positive definite: fall back to one LU determinant per block.
  for (Eigen::Index n = 1; n <= l; ++n) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a.topLeftCorner(n, n));
    const Eigen::MatrixXd& f = lu.matrixLU();
    double acc = 0.0;
    int sg = lu.permutationP().determinant();
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += std::log(std::abs(f(i, i)));
      if (f(i, i) < 0.0) sg = -sg;
      if (f(i, i) == 0.0) sg = 0;
    }
    s.push_back(static_cast<int>(n), acc, sg);
  }
  return s;
}

DistributionSeries efp(const CorrelatorTable& table, int l_max, bool force_pfaffian) {
  if (l_max < 1) throw std::invalid_argument("efp: l_max must be >= 1");
  if (!force_pfaffian && (table.anomalous.abs() == 0.0).all()) return efp_dephased(table, l_max);
  const SkewMatrix m = assemble_efp_interleaved(table, l_max);
  const auto pfs = leading_pfaffians(m.entries);
  DistributionSeries s;
  s.kind = SeriesKind::efp;
  s.tau_q = table.tau_q;
  s.shift = table.shift;
  s.dephased = false;
  s.push_back(0, 0.0, 1);
  for (std::size_t i = 0; i < pfs.size(); ++i) {
    const auto v = real_log(pfs[i], "efp");
    s.push_back(static_cast<int>(i + 1), v.first, v.second);
  }
  return s;
}

ConsistencyReport consistency_pl_efp(const DistributionSeries& pl, const DistributionSeries& el,
                                     double rho) {
  ConsistencyReport rep;
  const double xi = 1.0 / rho;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const int len = pl.index[i];
    double e_prev, e_mid, e_next;
    try {
      e_prev = el.at(len - 1);
      e_mid = el.at(len);
      e_next = el.at(len + 1);
    } catch (const std::out_of_range&) {
      continue;
    }
    const double second = e_next + e_prev - 2.0 * e_mid;
    const double resid = std::abs(rho * pl.value(i) - second);
    if (resid > rep.max_residual) {
      rep.max_residual = resid;
      rep.worst_l = len;
    }
    // xi P_L against xi^2 d^2E/dL^2, with the derivative from a five-point
    // stencil so the gap measures the lattice correction and not the stencil.
    if (len < 2) continue;
    double e_far_prev, e_far_next;
    try {
      e_far_prev = el.at(len - 2);
      e_far_next = el.at(len + 2);
    } catch (const std::out_of_range&) {
      continue;
    }
    const double d2 =
        (-e_far_next + 16.0 * e_next - 30.0 * e_mid + 16.0 * e_prev - e_far_prev) / 12.0;
    const double gap = std::abs(xi * pl.value(i) - xi * xi * d2);
    rep.max_continuum_gap = std::max(rep.max_continuum_gap, gap);
  }
  return rep;
}

MeanDomainSize mean_domain_size(const DistributionSeries& pl) {
  if (pl.kind != SeriesKind::domain_size)
    throw std::invalid_argument("mean_domain_size: expected a domain-size series");
  const std::size_t n = pl.size();
  if (n < 8) throw FitFailure("mean_domain_size: need at least 8 points for the tail fit");
  MeanDomainSize out;
  for (std::size_t i = 0; i < n; ++i) {
    out.partial += pl.index[i] * pl.value(i);
    out.norm += pl.value(i);
  }
  // ln P_L = c0 + c1 L + c2 ln L over the last quarter.
  const std::size_t first = n - std::max<std::size_t>(4, n / 4);
  const Eigen::Index m = static_cast<Eigen::Index>(n - first);
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t i = first + static_cast<std::size_t>(r);
    if (pl.sign[i] <= 0) throw FitFailure("mean_domain_size: non-positive P_L in the tail window");
    const double len = pl.index[i];
    design(r, 0) = 1.0;
    design(r, 1) = len;
    design(r, 2) = std::log(len);
    rhs(r) = pl.log_abs[i];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  if (!(c(1) < 0.0)) throw FitFailure("mean_domain_size: tail fit does not decay");
  out.tail_rate = -c(1);
  const int last = pl.index.back();
  double tail_norm = 0.0, tail_mean = 0.0;
  for (int len = last + 1;; ++len) {
    const double v = std::exp(c(0) + c(1) * len + c(2) * std::log(static_cast<double>(len)));
    tail_norm += v;
    tail_mean += len * v;
    if (len * v < 1e-16 * (out.partial + tail_mean) || len > 1000 * last) break;
  }
  out.tail = tail_mean;
  out.mean = out.partial + tail_mean;
  out.norm += tail_norm;
  return out;
}

}  // namespace kzk
