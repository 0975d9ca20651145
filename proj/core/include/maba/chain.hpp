#pragma once

// Physical objects of the twisted XXX chain: local spin operators, the
// rational R-matrix, the monodromy entries t_ij(u), the transfer matrix and
// the Hamiltonian.

#include <cstddef>

#include "maba/linalg.hpp"
#include "maba/params.hpp"
#include "maba/residuals.hpp"

namespace maba {

namespace spin {
CMatrix identity();
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix sigma_plus();
CMatrix sigma_minus();
// E_ij with a single 1 at (i, j), zero-based.
CMatrix unit(int i, int j);
// 4x4 permutation P = sum_ij E_ij (x) E_ji.
CMatrix permutation();
}  // namespace spin

// `op` acting on site `site` (zero-based) of an N-site chain.
CMatrix site_operator(const CMatrix& op, std::size_t site, std::size_t sites);

// All-up vacuum |0> of the 2^N space.
CVector vacuum(std::size_t sites);

// R(u) = (u/c) I + P on C^2 (x) C^2. Throws ParameterError for c = 0.
CMatrix r_matrix(cplx u, cplx c);

// The four auxiliary-space blocks of a 2x2 operator-valued matrix at one u.
struct OperatorQuad {
  CMatrix m11, m12, m21, m22;
  const CMatrix& operator()(int i, int j) const;
};

// Monodromy T_a(u) = R_a1(u - theta_1) ... R_aN(u - theta_N), assembled
// site by site in block form.
OperatorQuad monodromy_at(const ChainParams& chain, cplx u);

// Same product as one dense (2 * 2^N)-square matrix on V_a (x) H, built from
// explicit embeddings of every R_ak.
CMatrix monodromy_dense(const ChainParams& chain, cplx u);

// Entries of a monodromy-type matrix as polynomials in u. Used for both the
// bare t_ij and the modified nu_ij.
struct MonodromyFamily {
  MatrixPolynomial e11, e12, e21, e22;

  const MatrixPolynomial& operator()(int i, int j) const;
  OperatorQuad at(cplx u) const;
  std::size_t sites() const;
};

// Samples monodromy_at on N+1 nodes circling the inhomogeneities and interpolates.
MonodromyFamily build_monodromy(const ChainParams& chain);

// t(u) = kt t11 + k t22 + kp t21 + km t12.
MatrixPolynomial build_transfer(const MonodromyFamily& t, const TwistParams& twist);
MatrixPolynomial build_transfer(const ChainParams& chain, const TwistParams& twist);

enum class HamiltonianRoute { direct, transfer };

// direct: nearest-neighbour sum with the k = N bond closed by the twisted
// boundary substitution for sigma_{N+1}; needs gamma != 0.
// transfer: 2c t'(0) t(0)^{-1} - N; needs theta = 0 and t(0) invertible.
CMatrix build_hamiltonian(const ChainParams& chain, const TwistParams& twist,
                          HamiltonianRoute route);

// Boundary operators sigma^alpha_{N+1} = b^alpha expressed on site 1,
// alpha = x, y, z.
struct BoundarySpins {
  CMatrix x, y, z;
};
BoundarySpins boundary_spins(const TwistParams& twist);

// Residuals of the three exchange relations used by the ansatz:
//   m11(u) m12(v) = f(v,u) m12(v) m11(u) + g(u,v) m12(u) m11(v)
//   m22(u) m12(v) = f(u,v) m12(v) m22(u) + g(v,u) m12(u) m22(v)
//   m21(u) m12(v) = m12(v) m21(u) + g(u,v) (m11(v) m22(u) - m11(u) m22(v))
ResidualReport exchange_relation_residuals(const MonodromyFamily& m, cplx c, cplx u, cplx v);

// RTT on V_a (x) V_b (x) H, [t(u), t(v)], [R_ab(u-v), K_a K_b] and the
// exchange relations, all as Frobenius norms. Throws ParameterError for u = v.
ResidualReport structure_checks(const ChainParams& chain, const TwistParams& twist, cplx u,
                                cplx v);

}  // namespace maba
