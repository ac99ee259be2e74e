#include "kzk/quadrature.hpp"

#include <stdexcept>

namespace kzk {

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  Eigen::ArrayXd x(n), w(n);
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = w(n - 1 - i) = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  const auto sinc = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  // About four panels per half period keeps the rule exact to roundoff.
  const int panels = 4 + static_cast<int>(std::ceil(x / 0.75));
  return integrate_gl(sinc, 0.0, x, panels, 20);
}

}  // namespace kzk
