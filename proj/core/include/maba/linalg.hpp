#pragma once

// Dense complex linear algebra for operators on the 2^N dimensional quantum
// space.
//
// Basis convention (used by every module): the quantum space is the ordered
// tensor product V_1 (x) V_2 (x) ... (x) V_N, built with kron() so that site 1
// is the most significant index. On each site the first basis vector is spin
// up, so the all-up vacuum is basis vector 0 and the state with only site k
// flipped has index 2^(N-k).

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace maba {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

CMatrix kron(const CMatrix& a, const CMatrix& b);

double frobenius(const CMatrix& m);

// LU with partial pivoting. Throws DimensionError for non-square input.
cplx determinant(const CMatrix& m);

// Throws SingularityError when the LU factor has a zero pivot.
CMatrix inverse(const CMatrix& m);

// Solves m x = rhs; m must be square and nonsingular.
CVector solve(const CMatrix& m, const CVector& rhs);

struct EigenPair {
  cplx value;
  CVector vector;  // unit 2-norm
};

// All eigenpairs of a general complex matrix, with multiplicity.
//
// Schur form by shifted QR (capped at 100*n sweeps), eigenvectors by back
// substitution on the triangular factor. Each returned pair satisfies
// |m v - lambda v| <= 1e-8 |m|_F; otherwise ConvergenceError is thrown with
// the worst residual.
std::vector<EigenPair> eigenpairs(const CMatrix& m);

// Eigenvalues only (same Schur iteration, no residual check).
std::vector<cplx> eigenvalues(const CMatrix& m);

// Polynomial in u with matrix coefficients: sum_k coefficient(k) u^k.
// degree() is an upper bound; the leading coefficient may vanish.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  explicit MatrixPolynomial(std::vector<CMatrix> coefficients);

  static MatrixPolynomial zero(std::size_t degree, Eigen::Index rows,
                               Eigen::Index cols);

  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  Eigen::Index rows() const { return coeffs_.empty() ? 0 : coeffs_.front().rows(); }
  Eigen::Index cols() const { return coeffs_.empty() ? 0 : coeffs_.front().cols(); }

  const CMatrix& coefficient(std::size_t k) const { return coeffs_.at(k); }
  const std::vector<CMatrix>& coefficients() const { return coeffs_; }

  // Horner evaluation.
  CMatrix operator()(cplx u) const;
  CMatrix derivative(cplx u) const;

  MatrixPolynomial& operator+=(const MatrixPolynomial& other);
  MatrixPolynomial& operator*=(cplx s);

  friend MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial& b) {
    return a += b;
  }
  friend MatrixPolynomial operator*(cplx s, MatrixPolynomial a) { return a *= s; }

 private:
  std::vector<CMatrix> coeffs_;
};

struct MatrixSample {
  cplx node;
  CMatrix value;
};

// Entrywise Lagrange interpolation through exactly degree+1 samples; extra
// samples are fitted by least squares. Throws NodeError on coincident nodes
// and DimensionError on inconsistent shapes or too few samples.
MatrixPolynomial poly_from_samples(std::span<const MatrixSample> samples,
                                   std::size_t degree);

// u_k = k*c for k = 0..degree; every node is shifted by c/2 if any of them
// lands on an entry of `avoid`.
std::vector<cplx> default_nodes(std::size_t degree, cplx c,
                                std::span<const cplx> avoid = {});

// degree+1 points equally spaced on the circle |u - center| = radius.
std::vector<cplx> circle_nodes(std::size_t degree, cplx center, double radius);

// Scalar polynomials, coefficient k multiplies u^k.
using Coeffs = std::vector<cplx>;

Coeffs poly_mul(const Coeffs& a, const Coeffs& b);
Coeffs poly_add(const Coeffs& a, const Coeffs& b);
Coeffs poly_scale(const Coeffs& a, cplx s);
// p(u + shift)
Coeffs poly_shift(const Coeffs& p, cplx shift);
cplx poly_eval(const Coeffs& p, cplx u);
// Roots of a polynomial with nonzero leading coefficient (companion matrix).
std::vector<cplx> poly_roots(const Coeffs& p);
// Coefficients of the monic polynomial with the given roots.
Coeffs poly_from_roots(std::span<const cplx> roots);

}  // namespace maba
