#pragma once

// Adaptive Dormand-Prince 8(5,3) integrator for linear Schroedinger-type
// systems y' = f(t, y) over Eigen vectors. Tableau from Hairer, Norsett &
// Wanner, "Solving Ordinary Differential Equations I", without dense output.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "kzk/errors.hpp"

namespace kzk {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a heuristic
  double max_step = 0.0;      // 0 means unbounded
  std::size_t max_steps = 200'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

namespace detail::dop853 {

inline constexpr int kStages = 12;

inline constexpr std::array<double, kStages> C = {
    0.0,
    0.526001519587677318785587544488e-01,
    0.789002279381515978178381316732e-01,
    0.118350341907227396726757197510,
    0.281649658092772603273242802490,
    0.333333333333333333333333333333,
    0.25,
    0.307692307692307692307692307692,
    0.651282051282051282051282051282,
    0.6,
    0.857142857142857142857142857142,
    1.0};

// Row s holds a_{s,0..s-1}; row 12 is the propagating weight vector b.
inline constexpr std::array<std::array<double, kStages>, kStages + 1> A = {{
    {},
    {5.26001519587677318785587544488e-2},
    {1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2},
    {2.95875854768068491816892993775e-2, 0.0, 8.87627564304205475450678981324e-2},
    {2.41365134159266685502369798665e-1, 0.0, -8.84549479328286085344864962717e-1,
     9.24834003261792003115737966543e-1},
    {3.7037037037037037037037037037e-2, 0.0, 0.0, 1.70828608729473871279604482173e-1,
     1.25467687566822425016691814123e-1},
    {3.7109375e-2, 0.0, 0.0, 1.70252211019544039314978060272e-1,
     6.02165389804559606850219397283e-2, -1.7578125e-2},
    {3.70920001185047927108779319836e-2, 0.0, 0.0, 1.70383925712239993810214054705e-1,
     1.07262030446373284651809199168e-1, -1.53194377486244017527936158236e-2,
     8.27378916381402288758473766002e-3},
    {6.24110958716075717114429577812e-1, 0.0, 0.0, -3.36089262944694129406857109825,
     -8.68219346841726006818189891453e-1, 2.75920996994467083049415600797e1,
     2.01540675504778934086186788979e1, -4.34898841810699588477366255144e1},
    {4.77662536438264365890433908527e-1, 0.0, 0.0, -2.48811461997166764192642586468,
     -5.90290826836842996371446475743e-1, 2.12300514481811942347288949897e1,
     1.52792336328824235832596922938e1, -3.32882109689848629194453265587e1,
     -2.03312017085086261358222928593e-2},
    {-9.3714243008598732571704021658e-1, 0.0, 0.0, 5.18637242884406370830023853209,
     1.09143734899672957818500254654, -8.14978701074692612513997267357,
     -1.85200656599969598641566180701e1, 2.27394870993505042818970056734e1,
     2.49360555267965238987089396762, -3.0467644718982195003823669022},
    {2.27331014751653820792359768449, 0.0, 0.0, -1.05344954667372501984066689879e1,
     -2.00087205822486249909675718444, -1.79589318631187989172765950534e1,
     2.79488845294199600508499808837e1, -2.85899827713502369474065508674,
     -8.87285693353062954433549289258, 1.23605671757943030647266201528e1,
     6.43392746015763530355970484046e-1},
    {5.42937341165687622380535766363e-2, 0.0, 0.0, 0.0, 0.0,
     4.45031289275240888144113950566, 1.89151789931450038304281599044,
     -5.8012039600105847814672114227, 3.1116436695781989440891606237e-1,
     -1.52160949662516078556178806805e-1, 2.01365400804030348374776537501e-1,
     4.47106157277725905176885569043e-2},
}};

inline constexpr std::array<double, kStages> E5 = {
    0.1312004499419488073250102996e-1, 0.0, 0.0, 0.0, 0.0,
    -0.1225156446376204440720569753e+1, -0.4957589496572501915214079952,
    0.1664377182454986536961530415e+1, -0.3503288487499736816886487290,
    0.3341791187130174790297318841, 0.8192320648511571246570742613e-1,
    -0.2235530786388629525884427845e-1};

inline constexpr std::array<double, kStages> E3 = [] {
  std::array<double, kStages> e{};
  for (int i = 0; i < kStages; ++i) e[i] = A[kStages][i];
  e[0] -= 0.244094488188976377952755905512;
  e[8] -= 0.733846688281611857341361741547;
  e[11] -= 0.220588235294117647058823529412e-1;
  return e;
}();

}  // namespace detail::dop853

/// Integrates y from t0 to t1 in place. `rhs(t, y, dydt)` writes the
/// derivative into a preallocated vector of the same size.
template <typename Vector, typename Rhs>
OdeStats integrate_dop853(Rhs&& rhs, double t0, double t1, Vector& y,
                          const OdeOptions& opt = {}) {
  namespace tb = detail::dop853;
  OdeStats stats;
  if (t1 == t0) return stats;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const Eigen::Index n = y.size();

  std::array<Vector, tb::kStages> k;
  for (auto& ki : k) ki.resize(n);
  Vector y_stage(n), y_new(n), f_new(n), err3(n), err5(n);
  Eigen::ArrayXd scale(n);

  double t = t0;
  rhs(t, y, k[0]);
  ++stats.evaluations;

  const auto max_abs = [](const Vector& v) { return v.cwiseAbs().maxCoeff(); };

  double h_abs = opt.initial_step;
  if (h_abs <= 0.0) {
    const double d0 = max_abs(y) + 1e-300;
    const double d1 = max_abs(k[0]) + 1e-300;
    h_abs = 0.01 * d0 / d1;
    h_abs = std::min(h_abs, std::abs(t1 - t0));
  }
  if (opt.max_step > 0.0) h_abs = std::min(h_abs, opt.max_step);

  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 10.0;
  constexpr double kExponent = -1.0 / 8.0;

  while (dir * (t1 - t) > 0.0) {
    const double min_step = 10.0 * std::abs(std::nextafter(t, t + dir) - t);
    bool rejected = false;
    for (;;) {
      if (h_abs < min_step) {
        std::ostringstream msg;
        msg << "step size underflow at t=" << t << " (h=" << h_abs << ", rtol=" << opt.rtol
            << ")";
        throw IntegrationFailure(msg.str(), t, h_abs);
      }
      if (stats.accepted + stats.rejected >= opt.max_steps)
        throw IntegrationFailure("maximum number of steps exceeded", t, h_abs);

      double t_new = t + dir * h_abs;
      if (dir * (t_new - t1) > 0.0) t_new = t1;
      const double h = t_new - t;

      for (int s = 1; s < tb::kStages; ++s) {
        y_stage = y;
        for (int j = 0; j < s; ++j)
          if (tb::A[s][j] != 0.0) y_stage.noalias() += (h * tb::A[s][j]) * k[j];
        rhs(t + tb::C[s] * h, y_stage, k[s]);
      }
      y_new = y;
      for (int j = 0; j < tb::kStages; ++j)
        if (tb::A[tb::kStages][j] != 0.0) y_new.noalias() += (h * tb::A[tb::kStages][j]) * k[j];
      rhs(t_new, y_new, f_new);
      stats.evaluations += tb::kStages;

      err3.setZero();
      err5.setZero();
      for (int j = 0; j < tb::kStages; ++j) {
        if (tb::E3[j] != 0.0) err3.noalias() += tb::E3[j] * k[j];
        if (tb::E5[j] != 0.0) err5.noalias() += tb::E5[j] * k[j];
      }
      scale = opt.atol + y.cwiseAbs().array().max(y_new.cwiseAbs().array()) * opt.rtol;
      const double e5 = (err5.cwiseAbs().array() / scale).square().sum();
      const double e3 = (err3.cwiseAbs().array() / scale).square().sum();
      double err_norm = 0.0;
      if (e5 > 0.0 || e3 > 0.0)
        err_norm = std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * static_cast<double>(n));

      if (err_norm < 1.0) {
        double factor =
            err_norm == 0.0 ? kMaxFactor : std::min(kMaxFactor, kSafety * std::pow(err_norm, kExponent));
        if (rejected) factor = std::min(1.0, factor);
        h_abs *= factor;
        if (opt.max_step > 0.0) h_abs = std::min(h_abs, opt.max_step);
        t = t_new;
        y.swap(y_new);
        k[0].swap(f_new);
        ++stats.accepted;
        break;
      }
      h_abs *= std::max(kMinFactor, kSafety * std::pow(err_norm, kExponent));
      rejected = true;
      ++stats.rejected;
    }
  }
  return stats;
}

}  // namespace kzk
