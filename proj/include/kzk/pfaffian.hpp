#pragma once

// Pfaffians of dense skew-symmetric matrices by Parlett-Reid elimination
// with partial pivoting. Results are kept as log-magnitude plus phase so
// that products of many small pivots do not underflow.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace kzk {

/// value = exp(log_abs) * phase, |phase| = 1. Zero has log_abs = -inf.
template <typename Scalar>
struct LogPfaffian {
  double log_abs = 0.0;
  Scalar phase{1};

  bool is_zero() const { return std::isinf(log_abs) && log_abs < 0.0; }
  Scalar value() const { return is_zero() ? Scalar(0) : phase * std::exp(log_abs); }
};

namespace detail {

template <typename Scalar>
Scalar unit(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return x < 0 ? Scalar(-1) : Scalar(1);
  } else {
    return x / std::abs(x);
  }
}

}  // namespace detail

/// Largest |A + A^T| entry.
template <typename Derived>
double skew_deviation(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return 0.0;
  return (a + a.transpose()).cwiseAbs().maxCoeff();
}

/// Returns (A - A^T)/2 when A is skew-symmetric within `tol` (absolute),
/// throws std::invalid_argument otherwise.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> antisymmetrize(
    const Eigen::MatrixBase<Derived>& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) throw std::invalid_argument("antisymmetrize: matrix is not square");
  const double dev = skew_deviation(a);
  if (!(dev <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not skew-symmetric (max |A + A^T| = " << dev << ")";
    throw std::invalid_argument(msg.str());
  }
  return (a - a.transpose()) / typename Derived::Scalar(2);
}

/// Parlett-Reid elimination on a working copy. The input must already be
/// skew-symmetric; odd dimension gives zero.
template <typename Scalar>
LogPfaffian<Scalar> log_pfaffian_inplace(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  LogPfaffian<Scalar> out;
  const Eigen::Index n = a.rows();
  if (n % 2 != 0) {
    out.log_abs = -std::numeric_limits<double>::infinity();
    out.phase = Scalar(0);
    return out;
  }
  Vec tau, col;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      out.phase = -out.phase;
    }
    const Scalar pivot = a(k, k + 1);
    if (pivot == Scalar(0)) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.phase = Scalar(0);
      return out;
    }
    out.log_abs += std::log(std::abs(pivot));
    out.phase *= detail::unit(pivot);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      tau = a.row(k).tail(rest).transpose() / pivot;
      col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest).noalias() += tau * col.transpose();
      a.bottomRightCorner(rest, rest).noalias() -= col * tau.transpose();
    }
  }
  return out;
}

template <typename Derived>
LogPfaffian<typename Derived::Scalar> log_pfaffian(const Eigen::MatrixBase<Derived>& a,
                                                   double tol = 1e-12) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> work = antisymmetrize(a, tol);
  return log_pfaffian_inplace(work);
}

template <typename Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& a, double tol = 1e-12) {
  return log_pfaffian(a, tol).value();
}

/// Pfaffians of every leading 2j x 2j block, j = 1..n/2, from a single
/// elimination without pivoting. Each pivot is the ratio of consecutive
/// leading Pfaffians. When a pivot is below `pivot_floor` relative to the
/// matrix scale, the remaining blocks fall back to pivoted evaluations.
template <typename Derived>
std::vector<LogPfaffian<typename Derived::Scalar>> leading_pfaffians(
    const Eigen::MatrixBase<Derived>& a, double tol = 1e-12, double pivot_floor = 1e-10) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Mat orig = antisymmetrize(a, tol);
  const Eigen::Index n = orig.rows();
  const Eigen::Index blocks = n / 2;
  std::vector<LogPfaffian<Scalar>> out;
  out.reserve(static_cast<std::size_t>(blocks));
  if (blocks == 0) return out;
  const double scale = orig.cwiseAbs().maxCoeff();
  Mat w = orig;
  LogPfaffian<Scalar> acc;
  Vec tau, col;
  Eigen::Index j = 0;
  for (; j < blocks; ++j) {
    const Eigen::Index k = 2 * j;
    const Scalar pivot = w(k, k + 1);
    if (!(std::abs(pivot) > pivot_floor * scale)) break;
    acc.log_abs += std::log(std::abs(pivot));
    acc.phase *= detail::unit(pivot);
    out.push_back(acc);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      tau = w.row(k).tail(rest).transpose() / pivot;
      col = w.col(k + 1).tail(rest);
      w.bottomRightCorner(rest, rest).noalias() += tau * col.transpose();
      w.bottomRightCorner(rest, rest).noalias() -= col * tau.transpose();
    }
  }
  for (; j < blocks; ++j) {
    Mat sub = orig.topLeftCorner(2 * (j + 1), 2 * (j + 1));
    out.push_back(log_pfaffian_inplace(sub));
  }
  return out;
}

/// Dense skew-symmetric matrix with an overall sign that multiplies its
/// Pfaffian when the physical quantity is read off.
struct SkewMatrix {
  Eigen::MatrixXcd entries;
  int sign = 1;

  Eigen::Index size() const { return entries.rows(); }
  LogPfaffian<std::complex<double>> log_pfaffian() const {
    auto r = kzk::log_pfaffian(entries);
    r.phase *= static_cast<double>(sign);
    return r;
  }
  std::complex<double> pfaffian() const { return log_pfaffian().value(); }
};

}  // namespace kzk
