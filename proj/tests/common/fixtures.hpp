#pragma once

// Shared parameter sets for the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "maba/bethe.hpp"
#include "maba/params.hpp"
#include "maba/twist.hpp"

namespace fixtures {

using maba::cplx;

// Single site, theta = 0, c = 1, twist (2, 1, 1, 1).
inline maba::ChainParams single_site() { return maba::ChainParams::homogeneous(1, 1.0); }

inline maba::TwistParams twist_a() { return {2.0, 1.0, 1.0, 1.0}; }

inline maba::SpectralContext config_a(maba::RhoBranch b = maba::RhoBranch::minus) {
  return maba::SpectralContext::make(single_site(), twist_a(), b);
}

// Closed forms for the single-site configuration on the minus branch.
inline const double sqrt5 = std::sqrt(5.0);
inline const double rho_a = (3.0 - sqrt5) / 2.0;
inline const double mu_a = (3.0 - rho_a) / (3.0 - 2.0 * rho_a);

// Roots of E(u) = 2 rho u^2 + (2 rho + k - kt) u - (kt - rho).
inline std::vector<double> roots_a() {
  const double a = 2.0 * rho_a, b = 2.0 * rho_a - 1.0, c = -(2.0 - rho_a);
  const double d = std::sqrt(b * b - 4.0 * a * c);
  return {(-b - d) / (2.0 * a), (-b + d) / (2.0 * a)};
}

inline cplx normal_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline maba::TwistParams random_twist(std::mt19937_64& rng, bool diagonal = false) {
  maba::TwistParams t;
  t.kappa_tilde = normal_complex(rng);
  t.kappa = normal_complex(rng);
  if (!diagonal) {
    t.kappa_plus = normal_complex(rng);
    t.kappa_minus = normal_complex(rng);
  }
  return t;
}

inline maba::ChainParams random_chain(std::mt19937_64& rng, std::size_t n,
                                      cplx c = cplx(1.0, 0.2)) {
  maba::ChainParams p;
  p.sites = n;
  p.c = c;
  p.inhomogeneities.clear();
  for (std::size_t k = 0; k < n; ++k) p.inhomogeneities.push_back(normal_complex(rng, 0.3));
  return p;
}

inline maba::SpectralContext random_context(std::mt19937_64& rng, std::size_t n,
                                            bool diagonal = false,
                                            maba::RhoBranch b = maba::RhoBranch::minus) {
  auto chain = random_chain(rng, n);
  return maba::SpectralContext::make(chain, random_twist(rng, diagonal), b);
}

inline maba::VariableSet random_set(std::mt19937_64& rng, std::size_t m, double scale = 1.0) {
  std::vector<cplx> v;
  for (std::size_t k = 0; k < m; ++k) v.push_back(normal_complex(rng, scale));
  return maba::VariableSet(v);
}

}  // namespace fixtures
