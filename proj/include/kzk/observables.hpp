#pragma once

// Kink observables assembled from Pfaffians: M-kink correlators, the
// domain-size distribution P_L and the emptiness formation probability E_L.

#include <string>
#include <vector>

#include "kzk/correlators.hpp"
#include "kzk/wick.hpp"

namespace kzk {

enum class SeriesKind { domain_size, efp, connected_2, connected_3, mkink };

std::string to_string(SeriesKind kind);

/// Indexed real values stored as log|value| and sign.
struct DistributionSeries {
  SeriesKind kind = SeriesKind::efp;
  double tau_q = 0.0;
  PhaseShift shift{};
  bool dephased = false;
  std::vector<int> index;
  std::vector<double> log_abs;
  std::vector<int> sign;

  std::size_t size() const { return index.size(); }
  double value(std::size_t i) const;
  /// Value at the given index label; throws std::out_of_range if absent.
  double at(int label) const;
  void push_back(int label, double log_magnitude, int s);
  void push_value(int label, double v);
};

/// Real part of a Pfaffian after checking that the imaginary part is below
/// `tol` relative to its magnitude (InvariantViolation otherwise).
double real_pfaffian(const LogPfaffian<cplx>& pf, const std::string& what, double tol = 1e-10);

double mkink_correlator(const CorrelatorTable& table, const std::vector<int>& bonds);
/// Dephased form Det N with N_ij = N_{m_i - m_j}.
double mkink_correlator_dephased(const CorrelatorTable& table, const std::vector<int>& bonds);

/// xi_hat^2 (C_{m+R,m} - rho^2) from the Pfaffian path.
double connected_two_kink(const CorrelatorTable& table, int r);
double connected_two_kink_closed_form(double tau_q, double r, PhaseShift shift = {});
double connected_two_kink_dephased_limit(double tau_q, double r);
/// C_{m1,m2,m3} minus its disconnected parts.
double connected_three_kink(const CorrelatorTable& table, int m1, int m2, int m3);

/// P_L for L = 1..l_max from individual pivoted Pfaffians (parallel over L).
DistributionSeries domain_distribution(const CorrelatorTable& table, int l_max);
/// E_L for L = 0..l_max. Nested leading Pfaffians of the interleaved
/// matrix. A table with Delta = 0 goes through Cholesky factors of 1 - N~
/// unless `force_pfaffian` is set.
DistributionSeries efp(const CorrelatorTable& table, int l_max, bool force_pfaffian = false);
/// Leading determinants of 1 - N~ ignoring Delta.
DistributionSeries efp_dephased(const CorrelatorTable& table, int l_max);

int default_l_max(double tau_q);

struct ConsistencyReport {
  double max_residual = 0.0;     // max |rho P_L - (E_{L+1} + E_{L-1} - 2E_L)|
  int worst_l = 0;
  double max_continuum_gap = 0.0;  // max |xi P_L - xi^2 E''(L)|, E'' from a five-point stencil
};

/// Compares the domain distribution with the second difference of E_L for
/// every L present in both series.
ConsistencyReport consistency_pl_efp(const DistributionSeries& pl, const DistributionSeries& el,
                                     double rho);

struct MeanDomainSize {
  double mean = 0.0;       // sum_L L P_L including the tail estimate
  double partial = 0.0;    // sum over computed L only
  double tail = 0.0;
  double norm = 0.0;       // sum P_L including the tail
  double tail_rate = 0.0;  // fitted exponential rate per bond
};

/// Mean domain size from the series plus an exponential tail fitted over
/// the last quarter of the computed range.
MeanDomainSize mean_domain_size(const DistributionSeries& pl);

}  // namespace kzk
