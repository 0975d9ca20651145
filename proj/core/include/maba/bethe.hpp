#pragma once

// Scalar functional layer: rational kernels, vacuum weights, the
// inhomogeneous eigenvalue and Bethe equations, their derivatives and the
// T-Q restatement.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "maba/linalg.hpp"
#include "maba/params.hpp"
#include "maba/twist.hpp"

namespace maba {

// Ordered multiset of Bethe parameters. Entries must be pairwise separated
// by more than `tolerance`; construction throws CoincidenceError otherwise.
// Empty sets are valid and make every product 1 and every sum 0.
class VariableSet {
 public:
  VariableSet() = default;
  VariableSet(std::vector<cplx> values, double tolerance = 1e-9);
  VariableSet(std::initializer_list<cplx> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  cplx operator[](std::size_t i) const { return values_[i]; }
  const std::vector<cplx>& values() const { return values_; }
  double tolerance() const { return tolerance_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  // u-bar_i
  VariableSet without(std::size_t i) const;
  // u-bar_ij
  VariableSet without(std::size_t i, std::size_t j) const;
  // {u, u-bar}; u goes first.
  VariableSet prepend(cplx u) const;
  // Sorted by real part, then imaginary part.
  VariableSet canonical() const;
  VariableSet with_value(std::size_t i, cplx u) const;

 private:
  std::vector<cplx> values_;
  double tolerance_ = 1e-9;
};

struct Kernels {
  cplx g, f, h;
};

// g = c/(u-v), f = 1 + g, h = f/g = (u - v + c)/c. g and f throw
// CoincidenceError when |u - v| <= tol; h never does.
Kernels kernels(cplx u, cplx v, cplx c, double tol = 1e-9);
cplx kernel_g(cplx u, cplx v, cplx c, double tol = 1e-9);
cplx kernel_f(cplx u, cplx v, cplx c, double tol = 1e-9);
cplx kernel_h(cplx u, cplx v, cplx c);

// Multiset products: f(set, u) = prod_i f(u_i, u), f(u, set) = prod_i f(u, u_i), ...
cplx f_prod(const VariableSet& set, cplx u, cplx c);
cplx f_prod(cplx u, const VariableSet& set, cplx c);
cplx g_prod(const VariableSet& set, cplx u, cplx c);
cplx g_prod(cplx u, const VariableSet& set, cplx c);
cplx h_prod(const VariableSet& set, cplx u, cplx c);
cplx h_prod(cplx u, const VariableSet& set, cplx c);
cplx f_prod(const VariableSet& a, const VariableSet& b, cplx c);
cplx g_prod(const VariableSet& a, const VariableSet& b, cplx c);

// Chain plus twist and its factorization: everything the scalar formulas need.
struct SpectralContext {
  ChainParams chain;
  TwistParams twist;
  TwistFactorization factor;

  static SpectralContext make(ChainParams chain, TwistParams twist,
                              RhoBranch branch = RhoBranch::minus);

  cplx c() const { return chain.c; }
  std::size_t sites() const { return chain.sites; }
  // Distinctness tolerance 1e-9 * max(1, |c|).
  double eps_dist() const;
  // kt - rho, k - rho
  cplx d1() const { return twist.kappa_tilde - factor.rho; }
  cplx d2() const { return twist.kappa - factor.rho; }
  VariableSet variables(std::vector<cplx> values) const;
};

struct VacuumWeights {
  cplx lambda1, lambda2;
};

// lambda1 = prod (u - theta_i + c)/c, lambda2 = prod (u - theta_i)/c.
VacuumWeights vacuum_weights(const SpectralContext& ctx, cplx u);
// d/du of both weights.
VacuumWeights vacuum_weight_derivatives(const SpectralContext& ctx, cplx u);
// Monomial coefficients of lambda1 and lambda2.
std::pair<Coeffs, Coeffs> vacuum_weight_polynomials(const SpectralContext& ctx);

// Lambda_d(u, set | x, y) = x f(set, u) l1(u) + y f(u, set) l2(u).
cplx eigenvalue_diagonal(const SpectralContext& ctx, cplx u, const VariableSet& set, cplx x,
                         cplx y);
// E_d(u_i, set_i | x, y) = -x f(set_i, u_i) l1(u_i) + y f(u_i, set_i) l2(u_i).
cplx residual_diagonal(const SpectralContext& ctx, std::size_t i, const VariableSet& set, cplx x,
                       cplx y);
// Lambda_g(u, set) = 2 rho l1(u) l2(u) g(u, set).
cplx eigenvalue_inhomogeneous_part(const SpectralContext& ctx, cplx u, const VariableSet& set);
// E_g(u_i, set_i) = 2 rho l1(u_i) l2(u_i) g(u_i, set_i).
cplx residual_inhomogeneous_part(const SpectralContext& ctx, std::size_t i,
                                 const VariableSet& set);

// Lambda(u, set) = (kt - rho) l1 f(set,u) + (k - rho) l2 f(u,set) + 2 rho l1 l2 g(u,set).
cplx eigenvalue_lambda(const SpectralContext& ctx, cplx u, const VariableSet& set);
// E(u_i, set_i) with the same three terms, first one negated.
cplx bethe_residual(const SpectralContext& ctx, std::size_t i, const VariableSet& set);
std::vector<cplx> bethe_residuals(const SpectralContext& ctx, const VariableSet& set);

// d Lambda(u, set) / d u_i.
cplx eigenvalue_gradient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                         std::size_t i);
// d Lambda_d(u, set | x, y) / d u_i.
cplx eigenvalue_diagonal_gradient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                                  std::size_t i, cplx x, cplx y);

// J(i, k) = d E(u_i, set_i) / d u_k, for Newton iteration.
CMatrix bethe_jacobian(const SpectralContext& ctx, const VariableSet& set);

// Max coefficient modulus of
//   Lambda(u) Q(u) - (kt - rho) l1(u) Q(u - c) - (k - rho) l2(u) Q(u + c)
//     - 2 rho c^N l1(u) l2(u),
// with N = deg Q. Throws ArityError unless deg Q equals the site count.
double tq_polynomial_residual(const SpectralContext& ctx, const Coeffs& lambda, const Coeffs& q);

// Right-hand side of the T-Q identity divided by Q(u); equals Lambda(u, roots).
cplx tq_eigenvalue(const SpectralContext& ctx, cplx u, const Coeffs& q);

}  // namespace maba
