#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "kzk/pfaffian.hpp"
#include "kzk/wick.hpp"

using namespace kzk;
using kzk::testing::random_skew;

TEST_CASE("Pfaffian of small matrices") {
  Eigen::Matrix2cd a2;
  a2 << 0, cplx(1.5, -2), -cplx(1.5, -2), 0;
  CHECK(std::abs(pfaffian(a2) - cplx(1.5, -2)) < 1e-15);

  const cplx a(1.1, 0.2), b(-0.3, 0.7), c(2.0, -1.0), d(0.4, 0.4), e(-1.2, 0.0), f(0.5, -0.9);
  Eigen::Matrix4cd m;
  m << 0, a, b, c,
      -a, 0, d, e,
      -b, -d, 0, f,
      -c, -e, -f, 0;
  CHECK(std::abs(pfaffian(m) - (a * f - b * e + c * d)) < 1e-14);

  Eigen::Matrix4d r;
  r << 0, 1, 2, 3,
      -1, 0, 4, 5,
      -2, -4, 0, 6,
      -3, -5, -6, 0;
  CHECK(pfaffian(r) == doctest::Approx(1.0 * 6 - 2 * 5 + 3 * 4));
}

TEST_CASE("Pf^2 = Det on random complex skew matrices") {
  std::mt19937 rng(2024);
  for (int n = 2; n <= 64; n += 2) {
    const Eigen::MatrixXcd a = random_skew(n, rng);
    const cplx pf = pfaffian(a);
    const cplx det = a.partialPivLu().determinant();
    CHECK(std::abs(pf * pf - det) <= 1e-9 * std::abs(det));
  }
}

TEST_CASE("Pfaffian permutation rule, zero row, odd size") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 * (1 + trial % 8);
    const Eigen::MatrixXcd a = random_skew(n, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
    const cplx lhs = pfaffian(Eigen::MatrixXcd(p * a * p.transpose()));
    const cplx rhs = p.determinant() * pfaffian(a);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(rhs));
  }
  Eigen::MatrixXcd z = random_skew(8, rng);
  z.row(3).setZero();
  z.col(3).setZero();
  CHECK(pfaffian(z) == cplx(0.0));
  CHECK(pfaffian(random_skew(7, rng)) == cplx(0.0));
  CHECK(log_pfaffian(random_skew(7, rng)).is_zero());
}

TEST_CASE("skew-symmetry is enforced") {
  std::mt19937 rng(9);
  Eigen::MatrixXcd a = random_skew(6, rng);
  a(1, 2) += 1e-13;
  CHECK_NOTHROW(pfaffian(a));
  const Eigen::MatrixXcd s = antisymmetrize(a);
  CHECK(skew_deviation(s) == 0.0);
  a(1, 2) += 1e-6;
  CHECK_THROWS_AS(pfaffian(a), std::invalid_argument);
  CHECK_THROWS_AS(antisymmetrize(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("log representation survives underflow") {
  // Block diagonal with 200 blocks of 1e-10: Pf = 1e-2000.
  const int blocks = 200;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * blocks, 2 * blocks);
  for (int b = 0; b < blocks; ++b) {
    a(2 * b, 2 * b + 1) = 1e-10;
    a(2 * b + 1, 2 * b) = -1e-10;
  }
  const auto lp = log_pfaffian(a);
  CHECK(lp.log_abs == doctest::Approx(blocks * std::log(1e-10)));
  CHECK(lp.phase == 1.0);
}

TEST_CASE("leading Pfaffians agree with direct evaluation") {
  std::mt19937 rng(11);
  const Eigen::MatrixXcd a = random_skew(24, rng);
  const auto lead = leading_pfaffians(a);
  REQUIRE(lead.size() == 12);
  for (int j = 1; j <= 12; ++j) {
    const cplx direct = pfaffian(Eigen::MatrixXcd(a.topLeftCorner(2 * j, 2 * j)));
    CHECK(std::abs(lead[j - 1].value() - direct) <= 1e-10 * std::abs(direct));
  }
  // A vanishing leading pivot switches to the pivoted fallback.
  Eigen::MatrixXcd b = a;
  b(2, 3) = 0.0;
  b(3, 2) = 0.0;
  // Make the 4x4 leading Pfaffian vanish exactly: b01 b23 - b02 b13 + b03 b12 = 0.
  b(0, 1) = (b(0, 2) * b(1, 3) - b(0, 3) * b(1, 2)) / cplx(1.0, 0.0);
  b(1, 0) = -b(0, 1);
  b(2, 3) = 1.0;
  b(3, 2) = -1.0;
  const auto lead_b = leading_pfaffians(b);
  for (int j = 1; j <= 12; ++j) {
    const cplx direct = pfaffian(Eigen::MatrixXcd(b.topLeftCorner(2 * j, 2 * j)));
    CHECK(std::abs(lead_b[j - 1].value() - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("M-kink assembly") {
  const CorrelatorTable t = kzk::testing::random_table(16, 3);
  const double rho = t.density();
  CHECK(assemble_mkink(t, {4}).pfaffian().real() * assemble_mkink(t, {4}).sign ==
        doctest::Approx(rho));
  for (int r = 1; r < 8; ++r) {
    const SkewMatrix m = assemble_mkink(t, {r, 0});
    CHECK(m.sign == -1);
    const double expect = rho * rho + std::norm(t.Delta(r)) - t.N(r) * t.N(r);
    CHECK(std::abs(m.pfaffian() - expect) < 1e-13);
  }
  // Block form equals the interleaved operator string.
  const std::vector<int> pos = {0, 3, 4, 9};
  std::vector<FermionOp> ops;
  for (int m : pos) {
    ops.push_back({m, true});
    ops.push_back({m, false});
  }
  CHECK(std::abs(assemble_mkink(t, pos).pfaffian() - pfaffian(wick_matrix(t, ops).entries)) < 1e-13);
  // Without Delta the correlator is Det N.
  const CorrelatorTable d = t.dephased();
  const std::vector<int> three = {1, 2, 6};
  Eigen::Matrix3d nn;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) nn(i, j) = d.N(three[i] - three[j]);
  CHECK(std::abs(assemble_mkink(d, three).pfaffian() - nn.determinant()) < 1e-13);

  CHECK_THROWS_AS(assemble_mkink(t, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(assemble_mkink(t, {0, 40}), std::invalid_argument);
}

TEST_CASE("domain matrix") {
  const CorrelatorTable t = kzk::testing::random_table(20, 8);
  const double rho = t.density();
  // L = 1 is the adjacent two-kink correlator.
  const cplx p1 = assemble_domain(t, 1).pfaffian();
  CHECK(std::abs(p1 - assemble_mkink(t, {1, 0}).pfaffian()) < 1e-13);
  for (int len = 1; len <= 8; ++len) {
    const cplx pf = assemble_domain(t, len).pfaffian();
    CHECK(std::abs(pf.imag()) < 1e-12);
    CHECK(pf.real() >= -1e-12);
  }
  // Uncorrelated kinks: rho P_L = rho^2 (1 - rho)^{L-1}.
  const double r0 = 0.3;
  const CorrelatorTable u = kzk::testing::uncorrelated_table(r0, 12);
  for (int len = 1; len <= 10; ++len)
    CHECK(assemble_domain(u, len).pfaffian().real() ==
          doctest::Approx(r0 * r0 * std::pow(1 - r0, len - 1)));
  CHECK_THROWS_AS(assemble_domain(t, 0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_domain(t, 25), std::invalid_argument);
  (void)rho;
}

TEST_CASE("EFP block Toeplitz matrix") {
  const CorrelatorTable t = kzk::testing::random_table(20, 4);
  const int len = 7;
  const SkewMatrix m = assemble_efp(t, len);
  REQUIRE(m.size() == 2 * len);
  for (int bi = 0; bi < 2; ++bi)
    for (int bj = 0; bj < 2; ++bj)
      for (int i = 0; i + 1 < len; ++i)
        for (int j = 0; j + 1 < len; ++j)
          CHECK(m.entries(bi * len + i, bj * len + j) == m.entries(bi * len + i + 1, bj * len + j + 1));

  CHECK(assemble_efp(t, 1).pfaffian().real() == doctest::Approx(1 - t.density()));
  for (int l = 1; l <= 9; ++l) {
    const SkewMatrix b = assemble_efp(t, l);
    const cplx e = b.pfaffian();
    const cplx inter = assemble_efp_interleaved(t, l).pfaffian();
    CHECK(std::abs(e - inter) < 1e-13);
    CHECK(std::abs(e.imag()) < 1e-12);
    CHECK(e.real() >= 0.0);
    CHECK(e.real() <= 1.0);
    CHECK(e.real() == doctest::Approx(std::sqrt(std::abs(b.entries.determinant()))).epsilon(1e-9));
  }
  // Delta = 0 reduces to Det(1 - N~).
  const CorrelatorTable d = t.dephased();
  Eigen::MatrixXd one_minus(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j) one_minus(i, j) = (i == j) - d.N(i - j);
  CHECK(assemble_efp(d, len).pfaffian().real() == doctest::Approx(one_minus.determinant()));
}
