#include "kzk/wick.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kzk {

namespace {

void require_range(const CorrelatorTable& table, int span, const char* who) {
  if (span > table.r_max) {
    std::ostringstream msg;
    msg << who << ": separation " << span << " exceeds table range r_max=" << table.r_max;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

cplx contraction(const CorrelatorTable& t, const FermionOp& a, const FermionOp& b) {
  const int r = a.bond - b.bond;
  if (a.dagger && !b.dagger) return t.N(r);
  if (!a.dagger && b.dagger) return (r == 0 ? 1.0 : 0.0) - t.N(r);
  if (!a.dagger) return t.Delta(r);
  return -std::conj(t.Delta(r));
}

SkewMatrix wick_matrix(const CorrelatorTable& table, const std::vector<FermionOp>& ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  SkewMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const cplx c = contraction(table, ops[i], ops[j]);
      m.entries(i, j) = c;
      m.entries(j, i) = -c;
    }
  return m;
}

SkewMatrix assemble_mkink(const CorrelatorTable& table, const std::vector<int>& bonds) {
  const auto m = static_cast<Eigen::Index>(bonds.size());
  if (m == 0) throw std::invalid_argument("assemble_mkink: need at least one position");
  std::vector<int> sorted = bonds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("assemble_mkink: repeated kink position");
  require_range(table, sorted.back() - sorted.front(), "assemble_mkink");

  Eigen::MatrixXd nn(m, m);
  Eigen::MatrixXcd dd(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      nn(i, j) = table.N(bonds[i] - bonds[j]);
      dd(i, j) = table.Delta(bonds[i] - bonds[j]);
    }
  SkewMatrix out;
  out.entries.resize(2 * m, 2 * m);
  out.entries.topLeftCorner(m, m) = dd.adjoint();
  out.entries.topRightCorner(m, m) = nn.cast<cplx>();
  out.entries.bottomLeftCorner(m, m) = -nn.transpose().cast<cplx>();
  out.entries.bottomRightCorner(m, m) = dd;
  out.sign = ((m * (m - 1) / 2) % 2 == 0) ? 1 : -1;
  return out;
}

SkewMatrix assemble_domain(const CorrelatorTable& table, int length) {
  if (length < 1) throw std::invalid_argument("assemble_domain: L must be >= 1");
  require_range(table, length, "assemble_domain");
  std::vector<FermionOp> ops;
  ops.reserve(2 * static_cast<std::size_t>(length + 1));
  ops.push_back({0, true});
  ops.push_back({0, false});
  for (int m = 1; m < length; ++m) {
    ops.push_back({m, false});
    ops.push_back({m, true});
  }
  ops.push_back({length, true});
  ops.push_back({length, false});
  return wick_matrix(table, ops);
}

SkewMatrix assemble_efp(const CorrelatorTable& table, int length) {
  if (length < 1) throw std::invalid_argument("assemble_efp: L must be >= 1");
  require_range(table, length - 1, "assemble_efp");
  const Eigen::Index l = length;
  Eigen::MatrixXcd dt(l, l);
  Eigen::MatrixXd nt(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j) {
      dt(i, j) = table.Delta(static_cast<int>(i - j));
      nt(i, j) = table.N(static_cast<int>(i - j));
    }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(l, l);
  SkewMatrix out;
  out.entries.resize(2 * l, 2 * l);
  out.entries.topLeftCorner(l, l) = dt;
  out.entries.topRightCorner(l, l) = (id - nt).cast<cplx>();
  out.entries.bottomLeftCorner(l, l) = (nt - id).cast<cplx>();
  out.entries.bottomRightCorner(l, l) = dt.adjoint();
  out.sign = ((l * (l - 1) / 2) % 2 == 0) ? 1 : -1;
  return out;
}

SkewMatrix assemble_efp_interleaved(const CorrelatorTable& table, int length) {
  if (length < 1) throw std::invalid_argument("assemble_efp_interleaved: L must be >= 1");
  require_range(table, length - 1, "assemble_efp_interleaved");
  std::vector<FermionOp> ops;
  ops.reserve(2 * static_cast<std::size_t>(length));
  for (int m = 0; m < length; ++m) {
    ops.push_back({m, false});
    ops.push_back({m, true});
  }
  return wick_matrix(table, ops);
}

}  // namespace kzk
