#pragma once

#include <Eigen/Core>

#include <cmath>
#include <utility>

namespace kzk {

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> gauss_legendre(int n);

/// Composite Gauss-Legendre rule: `panels` equal panels on [a, b] with
/// `order` nodes each.
template <typename F>
double integrate_gl(F&& f, double a, double b, int panels, int order = 16) {
  static thread_local int cached_order = 0;
  static thread_local std::pair<Eigen::ArrayXd, Eigen::ArrayXd> rule;
  if (cached_order != order) {
    rule = gauss_legendre(order);
    cached_order = order;
  }
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double part = 0.0;
    for (int i = 0; i < order; ++i) part += rule.second(i) * f(mid + 0.5 * h * rule.first(i));
    sum += 0.5 * h * part;
  }
  return sum;
}

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

}  // namespace kzk
