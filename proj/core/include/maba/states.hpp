#pragma once

// Bethe vectors B^M(u) = nu12(u_1)...nu12(u_M)|0> and their duals as
// explicit 2^N vectors, with residual checks of every action formula.
//
// Vectors are never normalized. Action residuals are reported as
// |lhs - rhs| / max(1, |lhs|).

#include <cstddef>
#include <optional>
#include <vector>

#include "maba/bethe.hpp"
#include "maba/chain.hpp"
#include "maba/linalg.hpp"
#include "maba/residuals.hpp"

namespace maba {

// Bare monodromy, modified operators and transfer matrix of one context.
struct ChainOperators {
  MonodromyFamily t;
  MonodromyFamily nu;
  MatrixPolynomial transfer;

  static ChainOperators build(const SpectralContext& ctx);
};

struct BetheVector {
  VariableSet parameters;
  CVector amplitudes;  // for duals, the row vector stored as a column
  bool dual = false;
  // More parameters than sites: built anyway, but not an eigenvector candidate.
  bool beyond_sites = false;

  std::size_t order() const { return parameters.size(); }
};

BetheVector build_bethe_vector(const MonodromyFamily& nu, const VariableSet& set);
// <0| nu21(u_1) ... nu21(u_M)
BetheVector build_dual_vector(const MonodromyFamily& nu, const VariableSet& set);

// t12(u_1)...t12(u_M)|0> and <0|t21(u_1)...t21(u_M) for the bare operators.
CVector raising_string(const MonodromyFamily& t, const VariableSet& set);
RowVector lowering_string(const MonodromyFamily& t, const VariableSet& set);

// Coefficients of one action formula: raising multiplies B^{M+1}(u, set),
// wanted multiplies B^M(set), unwanted[i] multiplies B^M(u, set_i).
struct OffShellDecomposition {
  cplx raising = 0.0;
  cplx wanted = 0.0;
  std::vector<cplx> unwanted;
};

// t(u) acting on B^M(set) for any M.
OffShellDecomposition transfer_action(const SpectralContext& ctx, cplx u, const VariableSet& set);
// t(u) acting on B^N(set) with #set = N, once the raising term is rewritten.
OffShellDecomposition offshell_action(const SpectralContext& ctx, cplx u, const VariableSet& set);
// Right-hand side of the raising identity for #set = N.
OffShellDecomposition raising_decomposition(const SpectralContext& ctx, cplx u,
                                            const VariableSet& set);

// Coefficient of B^{M-1}(set_i) in nu21(u) B^M(set).
cplx nu21_single_coefficient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                             std::size_t i);
// Coefficient of B^{M-1}(u, set_ij) in nu21(u) B^M(set), i < j.
cplx nu21_pair_coefficient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                           std::size_t i, std::size_t j);

// nu12, nu11, nu22, nu21 actions on B^M and the transfer action.
ResidualReport offshell_action_residuals(const ChainOperators& ops, const SpectralContext& ctx,
                                         cplx u, const VariableSet& set);

// Same checks for the bare operators acting on t12 strings (rho = 0 forms).
ResidualReport string_action_residuals(const ChainOperators& ops, const SpectralContext& ctx,
                                       cplx u, const VariableSet& set);

// (km/mu) B^{N+1}(u, set) against Lambda_g B^N(set) + sum_i g(u_i,u) E_g B^N(u, set_i).
// Throws ArityError unless #set equals the site count.
double raising_identity_residual(const ChainOperators& ops, const SpectralContext& ctx, cplx u,
                                 const VariableSet& set);

// Relative residuals of t(u)B = Lambda B and C t(u) = Lambda C at each probe.
ResidualReport eigenstate_residuals(const ChainOperators& ops, const SpectralContext& ctx,
                                    const VariableSet& set, const std::vector<cplx>& probes);

// W^M_i(first | second) with M = #first + #second and i = #second.
cplx projection_coefficient(const SpectralContext& ctx, const VariableSet& first,
                            const VariableSet& second);
// W^M_0(set) = projection_coefficient(set | {}).
cplx w0_coefficient(const SpectralContext& ctx, const VariableSet& set);

struct ProjectionTerm {
  std::vector<std::size_t> first;   // indices in u-bar_I
  std::vector<std::size_t> second;  // indices in u-bar_II (carried by the t12 string)
  cplx weight = 0.0;                // W^M_i(u_I | u_II)
};

struct ProjectionExpansion {
  std::vector<ProjectionTerm> terms;
  CVector ket;      // reassembled nu12(set)|0>
  RowVector dual;   // reassembled <0|nu21(set)
  double ket_residual = 0.0;
  double dual_residual = 0.0;
  cplx w0_expansion = 0.0;
  // (km/(mu rho))^M <0|nu12(set)|0>; absent in the diagonal limit.
  std::optional<cplx> w0_direct;
  double w0_difference = 0.0;
};

ProjectionExpansion projection_expansion(const ChainOperators& ops, const SpectralContext& ctx,
                                         const VariableSet& set);

}  // namespace maba
