#include "maba/chain.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "maba/errors.hpp"

namespace maba {

namespace spin {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix sigma_x() { return sigma_plus() + sigma_minus(); }

CMatrix sigma_y() { return cplx(0.0, 1.0) * (sigma_minus() - sigma_plus()); }

CMatrix sigma_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

CMatrix sigma_plus() { return unit(0, 1); }

CMatrix sigma_minus() { return unit(1, 0); }

CMatrix unit(int i, int j) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(i, j) = 1.0;
  return m;
}

CMatrix permutation() {
  CMatrix p = CMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) p += kron(unit(i, j), unit(j, i));
  }
  return p;
}

}  // namespace spin

CMatrix site_operator(const CMatrix& op, std::size_t site, std::size_t sites) {
  if (site >= sites) throw DimensionError("site_operator: site index out of range");
  const auto left = static_cast<Eigen::Index>(std::size_t{1} << site);
  const auto right = static_cast<Eigen::Index>(std::size_t{1} << (sites - site - 1));
  return kron(kron(CMatrix::Identity(left, left), op), CMatrix::Identity(right, right));
}

CVector vacuum(std::size_t sites) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << sites));
  v(0) = 1.0;
  return v;
}

CMatrix r_matrix(cplx u, cplx c) {
  if (c == cplx(0.0)) throw ParameterError("r_matrix: c must be nonzero");
  return (u / c) * CMatrix::Identity(4, 4) + spin::permutation();
}

const CMatrix& OperatorQuad::operator()(int i, int j) const {
  if (i == 1 && j == 1) return m11;
  if (i == 1 && j == 2) return m12;
  if (i == 2 && j == 1) return m21;
  if (i == 2 && j == 2) return m22;
  throw std::out_of_range("OperatorQuad: indices are 1-based and in {1,2}");
}

OperatorQuad monodromy_at(const ChainParams& chain, cplx u) {
  chain.validate();
  // Block (l, j) of R_ak(w) on site k is (w/c) delta_lj I + E_jl.
  std::array<std::array<CMatrix, 2>, 2> t;
  t[0][0] = CMatrix::Identity(1, 1);
  t[1][1] = CMatrix::Identity(1, 1);
  t[0][1] = CMatrix::Zero(1, 1);
  t[1][0] = CMatrix::Zero(1, 1);
  for (std::size_t k = 0; k < chain.sites; ++k) {
    const cplx w = (u - chain.inhomogeneities[k]) / chain.c;
    std::array<std::array<CMatrix, 2>, 2> r;
    for (int l = 0; l < 2; ++l) {
      for (int j = 0; j < 2; ++j) {
        r[l][j] = spin::unit(j, l);
        if (l == j) r[l][j] += w * spin::identity();
      }
    }
    std::array<std::array<CMatrix, 2>, 2> next;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) next[i][j] = kron(t[i][0], r[0][j]) + kron(t[i][1], r[1][j]);
    }
    t = std::move(next);
  }
  return OperatorQuad{t[0][0], t[0][1], t[1][0], t[1][1]};
}

CMatrix monodromy_dense(const ChainParams& chain, cplx u) {
  chain.validate();
  const std::size_t n = chain.sites;
  const auto dim = static_cast<Eigen::Index>(chain.dimension());
  CMatrix mono = CMatrix::Identity(2 * dim, 2 * dim);
  for (std::size_t k = 0; k < n; ++k) {
    // R_ak = (w/c) 1 + sum_ij E_ij^(a) (x) E_ji^(k)
    CMatrix r = ((u - chain.inhomogeneities[k]) / chain.c) * CMatrix::Identity(2 * dim, 2 * dim);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        r += kron(spin::unit(i, j), site_operator(spin::unit(j, i), k, n));
      }
    }
    mono = mono * r;
  }
  return mono;
}

const MatrixPolynomial& MonodromyFamily::operator()(int i, int j) const {
  if (i == 1 && j == 1) return e11;
  if (i == 1 && j == 2) return e12;
  if (i == 2 && j == 1) return e21;
  if (i == 2 && j == 2) return e22;
  throw std::out_of_range("MonodromyFamily: indices are 1-based and in {1,2}");
}

OperatorQuad MonodromyFamily::at(cplx u) const { return {e11(u), e12(u), e21(u), e22(u)}; }

std::size_t MonodromyFamily::sites() const {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < e11.rows()) ++n;
  return n;
}

MonodromyFamily build_monodromy(const ChainParams& chain) {
  chain.validate();
  // Nodes on a circle around the inhomogeneities keep the samples of similar
  // size; k*c nodes reach |T| ~ N^N at the far end and cost digits near u = 0.
  cplx center = 0.0;
  for (cplx th : chain.inhomogeneities) center += th;
  center /= static_cast<double>(chain.sites);
  double radius = std::abs(chain.c);
  for (cplx th : chain.inhomogeneities) radius = std::max(radius, 2.0 * std::abs(th - center));
  const auto nodes = circle_nodes(chain.sites, center, radius);
  std::array<std::vector<MatrixSample>, 4> samples;
  for (cplx x : nodes) {
    auto q = monodromy_at(chain, x);
    samples[0].push_back({x, std::move(q.m11)});
    samples[1].push_back({x, std::move(q.m12)});
    samples[2].push_back({x, std::move(q.m21)});
    samples[3].push_back({x, std::move(q.m22)});
  }
  return MonodromyFamily{poly_from_samples(samples[0], chain.sites),
                         poly_from_samples(samples[1], chain.sites),
                         poly_from_samples(samples[2], chain.sites),
                         poly_from_samples(samples[3], chain.sites)};
}

MatrixPolynomial build_transfer(const MonodromyFamily& t, const TwistParams& twist) {
  return twist.kappa_tilde * t.e11 + twist.kappa * t.e22 + twist.kappa_plus * t.e21 +
         twist.kappa_minus * t.e12;
}

MatrixPolynomial build_transfer(const ChainParams& chain, const TwistParams& twist) {
  return build_transfer(build_monodromy(chain), twist);
}

BoundarySpins boundary_spins(const TwistParams& k) {
  const cplx gamma = k.gamma();
  if (std::abs(gamma) == 0.0) {
    throw TwistDegeneracyError("twisted boundary needs gamma = kt*k - kp*km != 0");
  }
  const cplx i(0.0, 1.0);
  const cplx kt = k.kappa_tilde, kk = k.kappa, kp = k.kappa_plus, km = k.kappa_minus;
  const CMatrix sx = spin::sigma_x(), sy = spin::sigma_y(), sz = spin::sigma_z();
  BoundarySpins b;
  b.x = ((kt * kt + kk * kk - kp * kp - km * km) / 2.0 * sx +
         i * (kk * kk - kt * kt - kp * kp + km * km) / 2.0 * sy + (kk * km - kt * kp) * sz) /
        gamma;
  b.y = (i * (kt * kt - kk * kk - kp * kp + km * km) / 2.0 * sx +
         (kt * kt + kk * kk + kp * kp + km * km) / 2.0 * sy - i * (kt * kp + kk * km) * sz) /
        gamma;
  b.z = ((kk * kp - kt * km) * sx + i * (kt * km + kk * kp) * sy + (kt * kk + kp * km) * sz) /
        gamma;
  return b;
}

CMatrix build_hamiltonian(const ChainParams& chain, const TwistParams& twist,
                          HamiltonianRoute route) {
  chain.validate();
  const std::size_t n = chain.sites;
  const auto dim = static_cast<Eigen::Index>(chain.dimension());

  if (route == HamiltonianRoute::transfer) {
    if (!chain.is_homogeneous()) {
      throw ParameterError("transfer-route Hamiltonian needs all inhomogeneities = 0");
    }
    const auto transfer = build_transfer(chain, twist);
    const CMatrix t0inv = inverse(transfer.coefficient(0));
    return 2.0 * chain.c * transfer.coefficient(1) * t0inv -
           static_cast<double>(n) * CMatrix::Identity(dim, dim);
  }

  const auto boundary = boundary_spins(twist);
  const std::array<CMatrix, 3> s{spin::sigma_x(), spin::sigma_y(), spin::sigma_z()};
  const std::array<CMatrix, 3> b{boundary.x, boundary.y, boundary.z};
  CMatrix h = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (const auto& op : s) h += site_operator(op, k, n) * site_operator(op, k + 1, n);
  }
  // Boundary factor on the left: for N = 1 both act on the same site.
  for (std::size_t a = 0; a < 3; ++a) {
    h += site_operator(b[a], 0, n) * site_operator(s[a], n - 1, n);
  }
  return h;
}

ResidualReport exchange_relation_residuals(const MonodromyFamily& m, cplx c, cplx u, cplx v) {
  if (u == v) throw ParameterError("exchange relations: degenerate argument u = v");
  const cplx guv = c / (u - v), gvu = c / (v - u);
  const cplx fuv = 1.0 + guv, fvu = 1.0 + gvu;
  const auto a = m.at(u);
  const auto b = m.at(v);
  ResidualReport out;
  out.push_back({"comsl21", frobenius(a.m11 * b.m12 - fvu * b.m12 * a.m11 - guv * a.m12 * b.m11)});
  out.push_back({"comsl22", frobenius(a.m22 * b.m12 - fuv * b.m12 * a.m22 - gvu * a.m12 * b.m22)});
  out.push_back({"comsl23", frobenius(a.m21 * b.m12 - b.m12 * a.m21 -
                                      guv * (b.m11 * a.m22 - a.m11 * b.m22))});
  return out;
}

ResidualReport structure_checks(const ChainParams& chain, const TwistParams& twist, cplx u,
                                cplx v) {
  chain.validate();
  if (u == v) throw ParameterError("structure_checks: degenerate argument u = v");
  const auto family = build_monodromy(chain);
  const auto dim = static_cast<Eigen::Index>(chain.dimension());
  const CMatrix id2 = spin::identity();
  const CMatrix idh = CMatrix::Identity(dim, dim);

  const auto tu = family.at(u);
  const auto tv = family.at(v);
  CMatrix ta = CMatrix::Zero(4 * dim, 4 * dim);
  CMatrix tb = CMatrix::Zero(4 * dim, 4 * dim);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ta += kron(kron(spin::unit(i, j), id2), tu(i + 1, j + 1));
      tb += kron(kron(id2, spin::unit(i, j)), tv(i + 1, j + 1));
    }
  }
  const CMatrix rab = kron(r_matrix(u - v, chain.c), idh);

  ResidualReport out;
  out.push_back({"rtt", frobenius(rab * ta * tb - tb * ta * rab)});

  const auto transfer = build_transfer(family, twist);
  const CMatrix xu = transfer(u), xv = transfer(v);
  out.push_back({"transfer_commutator", frobenius(xu * xv - xv * xu)});

  const CMatrix kk = kron(twist.matrix(), twist.matrix());
  const CMatrix r = r_matrix(u - v, chain.c);
  out.push_back({"gl2_invariance", frobenius(r * kk - kk * r)});

  append(out, exchange_relation_residuals(family, chain.c, u, v));
  return out;
}

}  // namespace maba
