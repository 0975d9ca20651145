#pragma once

#include <cstddef>
#include <vector>

#include "maba/linalg.hpp"

namespace maba {

// Chain of N spin-1/2 sites with crossing constant c and per-site shifts of
// the spectral parameter.
struct ChainParams {
  std::size_t sites = 1;
  cplx c = 1.0;
  std::vector<cplx> inhomogeneities{0.0};

  static ChainParams homogeneous(std::size_t sites, cplx c = 1.0);

  // Throws ParameterError naming the offending field.
  void validate() const;
  bool is_homogeneous() const;
  std::size_t dimension() const { return std::size_t{1} << sites; }
};

// Twist matrix K = [[kappa_tilde, kappa_plus], [kappa_minus, kappa]].
struct TwistParams {
  cplx kappa_tilde = 1.0;
  cplx kappa = 1.0;
  cplx kappa_plus = 0.0;
  cplx kappa_minus = 0.0;

  cplx gamma() const { return kappa_tilde * kappa - kappa_plus * kappa_minus; }
  CMatrix matrix() const;
  bool is_diagonal() const { return kappa_plus == cplx(0.0) && kappa_minus == cplx(0.0); }
};

}  // namespace maba
