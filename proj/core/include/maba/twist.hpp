#pragma once

// Factorization K = L D L of the twist and the modified operators nu_ij(u)
// built from it.

#include "maba/chain.hpp"
#include "maba/linalg.hpp"
#include "maba/params.hpp"
#include "maba/residuals.hpp"

namespace maba {

// Which root of rho^2 - (kt + k) rho + kp km = 0 to use:
// minus = ((kt + k) - sqrt(d)) / 2, plus = ((kt + k) + sqrt(d)) / 2 with the
// principal square root of d = (kt + k)^2 - 4 kp km.
enum class RhoBranch { minus, plus };

struct TwistFactorization {
  RhoBranch branch = RhoBranch::minus;
  // True for the U(1) limit kp = km = 0, where rho = 0, mu = 1 and L = I.
  bool diagonal = false;
  cplx rho = 0.0;
  cplx mu = 1.0;
  // rho/kp and rho/km; both zero in the diagonal limit.
  cplx rho_over_kplus = 0.0;
  cplx rho_over_kminus = 0.0;
  // km/mu, the coefficient of B^{M+1} in the transfer-matrix action.
  cplx raising = 0.0;
  // Largest eigenvalue branch of K: (k + kt + sqrt((k - kt)^2 + 4 kp km)) / 2.
  cplx alpha = 0.0;
  CMatrix L;
  CMatrix D;
};

// Throws TwistDegeneracyError if kp km = 0 (use diagonal_factorization) and
// SingularityError if kt + k - 2 rho = 0 for the chosen branch.
TwistFactorization factorize_twist(const TwistParams& twist, RhoBranch branch = RhoBranch::minus);

// U(1) limit; requires kp = km = 0.
TwistFactorization diagonal_factorization(const TwistParams& twist);

// Picks factorize_twist or diagonal_factorization depending on the twist.
TwistFactorization factorize(const TwistParams& twist, RhoBranch branch = RhoBranch::minus);

cplx twist_alpha(const TwistParams& twist);

// nu(u) = L T(u) L entrywise, as polynomials in u.
MonodromyFamily build_modified_operators(const MonodromyFamily& t, const TwistFactorization& f);

// Residuals (2-norm) of the three vacuum actions
//   nu11|0> = l1|0> + (rho/kp) nu12|0>
//   nu22|0> = l2|0> + (rho/kp) nu12|0>
//   nu21|0> = (rho/kp)(l1 + l2)|0> + (rho/kp)^2 nu12|0>
ResidualReport vacuum_action_residuals(const MonodromyFamily& nu, const TwistFactorization& f,
                                       const ChainParams& chain, cplx u);

}  // namespace maba
