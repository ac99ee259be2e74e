#pragma once

// Wick-contraction matrices of kink-fermion operator strings. Bond labels
// are integers; bond m stands for the half-integer position m + 1/2.

#include <vector>

#include "kzk/correlators.hpp"
#include "kzk/pfaffian.hpp"

namespace kzk {

struct FermionOp {
  int bond = 0;
  bool dagger = false;
};

/// Two-point contraction <a b> of the Gaussian state described by `table`.
cplx contraction(const CorrelatorTable& table, const FermionOp& a, const FermionOp& b);

/// M_ij = <op_i op_j> for i < j, so <op_1 ... op_2n> = Pf(M).
SkewMatrix wick_matrix(const CorrelatorTable& table, const std::vector<FermionOp>& ops);

/// Block form (D^dag, N; -N^T, D) of the M-kink correlator with sign
/// (-1)^{M(M-1)/2}. Positions must be distinct.
SkewMatrix assemble_mkink(const CorrelatorTable& table, const std::vector<int>& bonds);

/// rho P_L as a Pfaffian over the ordering
/// g^dag_0 g_0, g_1 g^dag_1, ..., g_{L-1} g^dag_{L-1}, g^dag_L g_L.
SkewMatrix assemble_domain(const CorrelatorTable& table, int length);

/// Block Toeplitz matrix (D~, 1 - N~; N~ - 1, D~^dag) with sign (-1)^{L(L-1)/2}.
SkewMatrix assemble_efp(const CorrelatorTable& table, int length);

/// E_L ordering g_0 g^dag_0 g_1 g^dag_1 ...; its leading 2L x 2L blocks give
/// every E_L up to `length`.
SkewMatrix assemble_efp_interleaved(const CorrelatorTable& table, int length);

}  // namespace kzk
