#pragma once

// Scalar products of Bethe vectors: direct contraction, the modified Slavnov
// determinant in both orientations, the Gaudin matrix and the modified
// Gaudin-Korepin norm, plus N = 1 closed forms and the U(1) reference path.
//
// S(u, v) always means <0| nu21(u) ... nu12(v) |0>, i.e. the dual vector is
// built on the first set.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "maba/bethe.hpp"
#include "maba/linalg.hpp"
#include "maba/solver.hpp"
#include "maba/states.hpp"

namespace maba {

enum class Orientation { u_onshell, v_onshell, norm };

const char* to_string(Orientation o);

struct OverlapReport {
  cplx direct = 0.0;
  cplx formula = 0.0;
  double relative_error = 0.0;
  Orientation orientation = Orientation::u_onshell;
};

// |a - b| / max(|a|, |b|, 1e-30)
double relative_error(cplx a, cplx b);

// Plain contraction of the dual amplitudes with the ket amplitudes.
cplx scalar_direct(const BetheVector& dual, const BetheVector& ket);

// Throws PreconditionError, listing the residuals, unless max_i |E(u_i)| <= tau.
void require_onshell(const SpectralContext& ctx, const VariableSet& set, double tol = 1e-8);

// Jacobian used by the Slavnov formula:
//   u_onshell: J(i, j) = d Lambda(v_j, u) / d u_i
//   v_onshell: J(i, j) = d Lambda(u_j, v) / d v_i
CMatrix slavnov_jacobian(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v,
                         Orientation o);

// c^N (mu^2/(kt + k - rho))^N W0(on-shell set) Det J / Det g, with
// g(v_i, u_j) for u_onshell and g(u_i, v_j) for v_onshell.
cplx slavnov_formula(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v,
                     Orientation o, double tol = 1e-8);

CMatrix gaudin_matrix(const SpectralContext& ctx, const VariableSet& u);

// (mu^2/(kt + k - rho))^N W0(u) prod_{i<j} g(u_i,u_j) g(u_j,u_i) Det G.
cplx gaudin_norm(const SpectralContext& ctx, const VariableSet& u, double tol = 1e-8);

// c d_{u_i} Lambda(v_j, u) / g(v_j, u) at v_j = u_j + eps for both eps, then
// Richardson-extrapolated to eps -> 0 and compared with the Gaudin matrix.
struct LimitCheck {
  CMatrix gaudin;
  CMatrix extrapolated;
  double relative_error = 0.0;  // max entry difference / max |G_ij|
};
LimitCheck gaudin_limit_check(const SpectralContext& ctx, const VariableSet& u,
                              std::array<double, 2> eps = {1e-4, 1e-5});

// Slavnov (u_onshell) at v = u + eps (1, 2, ..., N) and at 2 eps, extrapolated
// linearly to eps -> 0 and compared with gaudin_norm.
struct NormLimitCheck {
  cplx norm = 0.0;
  cplx limit = 0.0;
  double relative_error = 0.0;
};
NormLimitCheck norm_limit_check(const SpectralContext& ctx, const VariableSet& u,
                                double eps = 1e-5, double tol = 1e-8);

// Both sides of a Slavnov or norm evaluation, vectors built from ops.
OverlapReport slavnov_report(const ChainOperators& ops, const SpectralContext& ctx,
                             const VariableSet& u, const VariableSet& v, Orientation o,
                             double tol = 1e-8);
OverlapReport norm_report(const ChainOperators& ops, const SpectralContext& ctx,
                          const VariableSet& u, double tol = 1e-8);

// |S(a, b)| / (|C(a)| |B(b)|)
double normalized_overlap(const ChainOperators& ops, const VariableSet& a, const VariableSet& b);

// B(u) C(u) / N(u): the spectral projector onto the eigenline of an on-shell u.
CMatrix spectral_projector(const ChainOperators& ops, const SpectralContext& ctx,
                           const VariableSet& u, double tol = 1e-8);

struct N1Reference {
  cplx direct = 0.0;
  cplx parametrization = 0.0;  // mu (S_d + mu/(kt+k-rho) (Lg(u,v) W0(v) + Lg(v,u) W0(u)))
  cplx alternative = 0.0;      // mu^2 S_d + mu^2 rho^2/(kp km) W0(u) W0(v)
  double parametrization_error = 0.0;
  double alternative_error = 0.0;
  // Only when v is on-shell: the linearized form with E(v) = 0 imposed.
  std::optional<cplx> linearized;
  std::optional<double> linearized_error;
};

// Throws ArityError unless N = 1.
N1Reference n1_reference(const ChainOperators& ops, const SpectralContext& ctx, cplx u, cplx v,
                         double tol = 1e-8);

struct SimpleAbaReport {
  cplx alpha = 0.0;
  // Max over probes of the distance from alpha l1 + (k + kt - alpha) l2 to the
  // closest transfer-matrix eigenvalue.
  double spectrum_gap = 0.0;
  std::optional<std::size_t> matched_solution;
  double match_gap = 0.0;
};

SimpleAbaReport simple_aba_check(const SpectralContext& ctx, const MatrixPolynomial& transfer,
                                 const std::vector<BetheSolution>& solutions,
                                 const std::vector<cplx>& probes, double tol = 1e-9);

// Reference path for the diagonal twist, any M:
//   (c/kt)^M l2(v) Det(d_{v_i} Lambda_d(u_j, v | kt, k)) / Det g(u_i, v_j)
// with v on-shell under the diagonal Bethe equations.
cplx classical_slavnov(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v,
                       double tol = 1e-8);

// Five probe points spread around the inhomogeneities.
std::vector<cplx> default_probes(const SpectralContext& ctx, std::size_t count = 5);

}  // namespace maba
