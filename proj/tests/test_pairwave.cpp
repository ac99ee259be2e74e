#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "kzk/correlators.hpp"
#include "kzk/errors.hpp"
#include "kzk/pairwave.hpp"

using namespace kzk;

TEST_CASE("pair amplitude") {
  const double tau = 16;
  const LandauZenerModel lz{tau};
  // p = 1/2 gives |Z| = 1.
  const double k_half = std::sqrt(std::log(2.0) / (2 * kPi * tau));
  CHECK(std::abs(pair_amplitude(lz, k_half)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pair_pole_residue(lz)) == doctest::Approx(1 / std::sqrt(2 * kPi * tau)).epsilon(1e-6));
  CHECK_THROWS_AS(pair_amplitude(lz, 0.0), SingularPoint);

  const SuddenQuenchModel far{1e12};
  for (double k : {0.1, 0.7, 1.5, 3.0}) {
    CHECK(std::abs(pair_amplitude(far, k) - 1 / std::tan(k / 2)) < 1e-9);
  }
}

TEST_CASE("sudden quench from deep in the paramagnet: Z_n = -2 sgn n") {
  const SuddenQuenchModel far{1e12};
  for (double n : {1.0, 2.0, 5.0, 17.0, 60.0}) {
    CHECK(std::abs(pair_wavefunction(far, n) + 2.0) < 1e-8);
    CHECK(std::abs(pair_wavefunction(far, -n) - 2.0) < 1e-8);
  }
}

TEST_CASE("Z_n is odd") {
  const LandauZenerModel lz{16};
  for (double n : {0.5, 1.0, 3.5, 20.0, 73.0}) {
    CHECK(std::abs(pair_wavefunction(lz, -n) + pair_wavefunction(lz, n)) < 1e-12);
  }
  CHECK_THROWS_AS(pair_wavefunction(lz, 0.0), std::invalid_argument);
}

TEST_CASE("Kibble-Zurek plateau") {
  for (double tau : {16.0, 64.0}) {
    const LandauZenerModel lz{tau};
    const double xi = kz_length(tau);
    for (double m : {5.0, 6.0, 8.0}) {
      const cplx z = pair_wavefunction(lz, std::round(m * xi));
      CHECK(std::abs(z) * xi / (2 * std::sqrt(kPi)) == doctest::Approx(1.0).epsilon(0.02));
    }
  }
}

TEST_CASE("sudden quenches near the critical point") {
  std::vector<double> scaled[2];
  int i = 0;
  for (double eps : {0.05, 0.1}) {
    const SuddenQuenchModel para{1 + eps};
    const double xi = pair_length(para);
    CHECK(xi == doctest::Approx(1 / std::log(1 + eps)));
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      scaled[i].push_back(std::abs(pair_wavefunction(para, std::round(x * xi))) * xi);
    }
    // Plateau for n >> xi.
    CHECK(scaled[i].back() > 0.1);
    CHECK(std::abs(scaled[i][4] / scaled[i][3] - 1) < 0.05);
    ++i;
  }
  for (std::size_t j = 0; j < scaled[0].size(); ++j)
    CHECK(std::abs(scaled[0][j] / scaled[1][j] - 1) < 0.05);

  for (double eps : {0.05, 0.1}) {
    const SuddenQuenchModel ferro{1 - eps};
    const double xi = pair_length(ferro);
    double peak = 0;
    for (int n = 1; n <= static_cast<int>(3 * xi); ++n)
      peak = std::max(peak, std::abs(pair_wavefunction(ferro, n)));
    const double tail = std::abs(pair_wavefunction(ferro, std::round(10 * xi)));
    CHECK(tail < 0.01 * peak);
  }
}

TEST_CASE("pair wave series") {
  const LandauZenerModel lz{16};
  const PairWave w = pair_wave_series(lz, {1, 2, 3});
  CHECK(w.source == "kz-ramp");
  CHECK(w.length == doctest::Approx(kz_length(16)));
  REQUIRE(w.z.size() == 3);
  CHECK(std::abs(w.z[1] - pair_wavefunction(lz, 2)) < 1e-13);
  const PairWave s = pair_wave_series(SuddenQuenchModel{2.0}, {1});
  CHECK(s.source == "sudden");
  CHECK(s.parameter == 2.0);
}
