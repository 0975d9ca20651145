#include "maba/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maba/errors.hpp"

namespace maba {

ChainParams ChainParams::homogeneous(std::size_t sites, cplx c) {
  return ChainParams{sites, c, std::vector<cplx>(sites, 0.0)};
}

void ChainParams::validate() const {
  if (sites < 1) throw ParameterError("chain.sites must be >= 1");
  if (sites > 12) throw ParameterError("chain.sites must be <= 12");
  if (c == cplx(0.0)) throw ParameterError("chain.c must be nonzero");
  if (inhomogeneities.size() != sites) {
    throw ParameterError("chain.inhomogeneities has " + std::to_string(inhomogeneities.size()) +
                         " entries, expected " + std::to_string(sites));
  }
  const auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!finite(c) || !std::all_of(inhomogeneities.begin(), inhomogeneities.end(), finite)) {
    throw ParameterError("chain parameters must be finite");
  }
}

bool ChainParams::is_homogeneous() const {
  return std::all_of(inhomogeneities.begin(), inhomogeneities.end(),
                     [](cplx t) { return t == cplx(0.0); });
}

CMatrix TwistParams::matrix() const {
  CMatrix k(2, 2);
  k << kappa_tilde, kappa_plus, kappa_minus, kappa;
  return k;
}

}  // namespace maba
