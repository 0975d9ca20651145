#include "doctest.h"

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "maba/chain.hpp"
#include "maba/errors.hpp"
#include "maba/linalg.hpp"

using namespace maba;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
  return m;
}

std::vector<cplx> sorted_by_real(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return v;
}

}  // namespace

TEST_SUITE("tensor_core") {

TEST_CASE("kron of identities and of sigma_z") {
  CHECK(kron(spin::identity(), spin::identity()).isApprox(CMatrix::Identity(4, 4)));
  CMatrix zz = kron(spin::sigma_z(), spin::sigma_z());
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.diagonal() << 1.0, -1.0, -1.0, 1.0;
  CHECK((zz - expected).norm() == 0.0);
}

TEST_CASE("kron(sigma+, sigma-) has its single entry at (1, 2)") {
  // Basis |up up>, |up down>, |down up>, |down down>; sigma+ maps down to up.
  CMatrix m = kron(spin::sigma_plus(), spin::sigma_minus());
  CHECK(m(1, 2) == cplx(1.0));
  CHECK(m.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("kron is associative on integer matrices") {
  CMatrix a(2, 2), b(2, 3), c(3, 1);
  a << 1.0, 2.0, -1.0, 3.0;
  b << 0.0, 1.0, 4.0, 2.0, -2.0, 5.0;
  c << 7.0, -1.0, 2.0;
  CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() == 0.0);
}

TEST_CASE("determinant basics") {
  CHECK(determinant(CMatrix::Identity(3, 3)) == cplx(1.0));
  CMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  CHECK(std::abs(determinant(swap) + 1.0) < 1e-15);
  CHECK_THROWS_AS(determinant(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("determinant of a Cauchy matrix matches the product formula") {
  // g(v_i, u_j) = 1/(v_i - u_j), c = 1, v = (0, 1), u = (2, 3).
  const std::vector<double> v{0.0, 1.0}, u{2.0, 3.0};
  CMatrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = 1.0 / (v[i] - u[j]);
  // prod_{i<j} (v_j - v_i)(u_i - u_j) / prod_{i,j} (v_i - u_j)
  double num = (v[1] - v[0]) * (u[0] - u[1]);
  double den = 1.0;
  for (double a : v)
    for (double b : u) den *= a - b;
  CHECK(std::abs(determinant(m) - num / den) < 1e-14);
}

TEST_CASE("determinant is multiplicative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix a = random_matrix(rng, 6), b = random_matrix(rng, 6);
    const cplx lhs = determinant(a * b), rhs = determinant(a) * determinant(b);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("inverse of a singular matrix throws") {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(inverse(m), SingularityError);
}

TEST_CASE("eigenpairs of small closed-form matrices") {
  CMatrix d = CMatrix::Zero(2, 2);
  d.diagonal() << 1.0, 2.0;
  auto pairs = eigenpairs(d);
  std::vector<cplx> vals;
  for (auto& p : pairs) vals.push_back(p.value);
  vals = sorted_by_real(vals);
  CHECK(std::abs(vals[0] - 1.0) < 1e-14);
  CHECK(std::abs(vals[1] - 2.0) < 1e-14);

  // Single-site transfer matrix at u = 0.
  CMatrix t(2, 2);
  t << 2.0, 1.0, 1.0, 1.0;
  vals.clear();
  for (auto& p : eigenpairs(t)) vals.push_back(p.value);
  vals = sorted_by_real(vals);
  CHECK(std::abs(vals[0] - (3.0 - fixtures::sqrt5) / 2.0) < 1e-13);
  CHECK(std::abs(vals[1] - (3.0 + fixtures::sqrt5) / 2.0) < 1e-13);
}

TEST_CASE("eigenpair residuals on random matrices") {
  std::mt19937_64 rng(5);
  for (Eigen::Index n : {4, 16, 64}) {
    CMatrix m = random_matrix(rng, n);
    auto pairs = eigenpairs(m);
    REQUIRE(pairs.size() == static_cast<std::size_t>(n));
    for (auto& p : pairs) {
      CHECK(std::abs(p.vector.norm() - 1.0) < 1e-12);
      CHECK((m * p.vector - p.value * p.vector).norm() <= 1e-8 * frobenius(m));
    }
  }
}

TEST_CASE("eigenpairs rejects non-square input") {
  CHECK_THROWS_AS(eigenpairs(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("interpolation through two samples gives u I") {
  std::vector<MatrixSample> s{{0.0, CMatrix::Zero(2, 2)}, {1.0, CMatrix::Identity(2, 2)}};
  auto p = poly_from_samples(s, 1);
  CHECK(p.coefficient(0).norm() < 1e-15);
  CHECK((p.coefficient(1) - CMatrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("a constant sampled at three nodes has vanishing higher coefficients") {
  CMatrix k(2, 2);
  k << 1.0, cplx(0.0, 2.0), -3.0, 0.5;
  std::vector<MatrixSample> s{{0.0, k}, {1.0, k}, {cplx(0.3, 0.4), k}};
  auto p = poly_from_samples(s, 2);
  CHECK((p.coefficient(0) - k).norm() < 1e-12);
  CHECK(p.coefficient(1).norm() < 1e-12);
  CHECK(p.coefficient(2).norm() < 1e-12);
}

TEST_CASE("interpolated t11 on one site is diag(u + 1, u)") {
  const auto chain = fixtures::single_site();
  std::vector<MatrixSample> s{{0.0, monodromy_at(chain, 0.0).m11},
                              {1.0, monodromy_at(chain, 1.0).m11}};
  auto p = poly_from_samples(s, 1);
  CMatrix c0 = CMatrix::Zero(2, 2), c1 = CMatrix::Identity(2, 2);
  c0(0, 0) = 1.0;
  CHECK((p.coefficient(0) - c0).norm() < 1e-14);
  CHECK((p.coefficient(1) - c1).norm() < 1e-14);
}

TEST_CASE("interpolation reproduces held-out samples") {
  std::mt19937_64 rng(3);
  std::vector<CMatrix> coeffs;
  for (int k = 0; k <= 3; ++k) coeffs.push_back(random_matrix(rng, 3));
  const MatrixPolynomial truth(coeffs);
  std::vector<MatrixSample> s;
  for (cplx x : default_nodes(3, 1.0)) s.push_back({x, truth(x)});
  auto p = poly_from_samples(s, 3);
  for (cplx x : {cplx(0.37, -0.2), cplx(-1.3, 0.8), cplx(2.5, 0.1)}) {
    CHECK((p(x) - truth(x)).norm() <= 1e-9 * truth(x).norm());
  }
}

TEST_CASE("interpolation errors") {
  std::vector<MatrixSample> coincident{{1.0, CMatrix::Identity(2, 2)}, {1.0, CMatrix::Zero(2, 2)}};
  CHECK_THROWS_AS(poly_from_samples(coincident, 1), NodeError);
  std::vector<MatrixSample> few{{1.0, CMatrix::Identity(2, 2)}};
  CHECK_THROWS_AS(poly_from_samples(few, 1), DimensionError);
}

TEST_CASE("default nodes avoid inhomogeneities") {
  auto plain = default_nodes(2, 1.0);
  CHECK(plain == std::vector<cplx>{0.0, 1.0, 2.0});
  const std::vector<cplx> avoid{1.0};
  auto shifted = default_nodes(2, 1.0, avoid);
  CHECK(shifted == std::vector<cplx>{0.5, 1.5, 2.5});
}

TEST_CASE("scalar polynomial helpers") {
  const std::vector<cplx> r{1.0, 2.0, cplx(0.0, 3.0)};
  Coeffs p = poly_from_roots(r);
  CHECK(p.size() == 4);
  for (cplx x : r) CHECK(std::abs(poly_eval(p, x)) < 1e-13);
  auto found = poly_roots(p);
  REQUIRE(found.size() == 3);
  for (cplx x : r) {
    double best = 1.0;
    for (cplx y : found) best = std::min(best, std::abs(x - y));
    CHECK(best < 1e-12);
  }
  Coeffs q = poly_shift(p, 0.5);
  CHECK(std::abs(poly_eval(q, 0.3) - poly_eval(p, 0.8)) < 1e-13);
}

}  // TEST_SUITE
