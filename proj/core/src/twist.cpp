#include "maba/twist.hpp"

#include <cmath>

#include "maba/errors.hpp"

namespace maba {

cplx twist_alpha(const TwistParams& k) {
  const cplx d = (k.kappa - k.kappa_tilde) * (k.kappa - k.kappa_tilde) +
                 4.0 * k.kappa_plus * k.kappa_minus;
  return 0.5 * (k.kappa + k.kappa_tilde + std::sqrt(d));
}

TwistFactorization factorize_twist(const TwistParams& k, RhoBranch branch) {
  const cplx prod = k.kappa_plus * k.kappa_minus;
  if (prod == cplx(0.0)) {
    throw TwistDegeneracyError(
        "factorize_twist: kappa_plus * kappa_minus = 0; use the U(1)-limit "
        "(diagonal) factorization instead");
  }
  const cplx sum = k.kappa_tilde + k.kappa;
  const cplx root = std::sqrt(sum * sum - 4.0 * prod);

  TwistFactorization f;
  f.branch = branch;
  f.rho = branch == RhoBranch::minus ? 0.5 * (sum - root) : 0.5 * (sum + root);
  const cplx denom = sum - 2.0 * f.rho;
  if (std::abs(denom) <= 1e-14 * std::max(1.0, std::abs(sum))) {
    throw SingularityError(std::string("factorize_twist: kt + k - 2 rho = 0 on the ") +
                           (branch == RhoBranch::minus ? "minus" : "plus") +
                           " branch (the two roots coincide; no branch avoids it)");
  }
  f.mu = (sum - f.rho) / denom;
  f.rho_over_kplus = f.rho / k.kappa_plus;
  f.rho_over_kminus = f.rho / k.kappa_minus;
  f.raising = k.kappa_minus / f.mu;
  f.alpha = twist_alpha(k);

  f.L = CMatrix(2, 2);
  f.L << 1.0, f.rho_over_kminus, f.rho_over_kplus, 1.0;
  f.L *= std::sqrt(f.mu);
  f.D = CMatrix::Zero(2, 2);
  f.D(0, 0) = k.kappa_tilde - f.rho;
  f.D(1, 1) = k.kappa - f.rho;
  return f;
}

TwistFactorization diagonal_factorization(const TwistParams& k) {
  if (!k.is_diagonal()) {
    throw ParameterError("diagonal_factorization: needs kappa_plus = kappa_minus = 0");
  }
  TwistFactorization f;
  f.diagonal = true;
  f.alpha = twist_alpha(k);
  f.L = CMatrix::Identity(2, 2);
  f.D = k.matrix();
  return f;
}

TwistFactorization factorize(const TwistParams& twist, RhoBranch branch) {
  return twist.is_diagonal() ? diagonal_factorization(twist) : factorize_twist(twist, branch);
}

MonodromyFamily build_modified_operators(const MonodromyFamily& t, const TwistFactorization& f) {
  if (f.diagonal) return t;
  const cplx a = f.rho_over_kplus;   // rho/kp
  const cplx b = f.rho_over_kminus;  // rho/km
  const cplx mu = f.mu;
  return MonodromyFamily{
      mu * (t.e11 + a * t.e12 + b * t.e21 + (a * b) * t.e22),
      mu * (t.e12 + b * (t.e11 + t.e22) + (b * b) * t.e21),
      mu * (t.e21 + a * (t.e11 + t.e22) + (a * a) * t.e12),
      mu * (t.e22 + a * t.e12 + b * t.e21 + (a * b) * t.e11),
  };
}

ResidualReport vacuum_action_residuals(const MonodromyFamily& nu, const TwistFactorization& f,
                                       const ChainParams& chain, cplx u) {
  cplx l1 = 1.0, l2 = 1.0;
  for (cplx th : chain.inhomogeneities) {
    l1 *= (u - th + chain.c) / chain.c;
    l2 *= (u - th) / chain.c;
  }
  const CVector vac = vacuum(chain.sites);
  const auto n = nu.at(u);
  const CVector raised = n.m12 * vac;
  const cplx r = f.rho_over_kplus;
  ResidualReport out;
  out.push_back({"nu11_vacuum", (n.m11 * vac - l1 * vac - r * raised).norm()});
  out.push_back({"nu22_vacuum", (n.m22 * vac - l2 * vac - r * raised).norm()});
  out.push_back({"nu21_vacuum", (n.m21 * vac - r * (l1 + l2) * vac - r * r * raised).norm()});
  return out;
}

}  // namespace maba
