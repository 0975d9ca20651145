#include "maba/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "maba/errors.hpp"

namespace maba {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Eigen::ComplexSchur<CMatrix> schur_of(const CMatrix& m, bool with_u) {
  const Eigen::Index n = m.rows();
  Eigen::ComplexSchur<CMatrix> schur(n);
  schur.setMaxIterations(100 * n);
  schur.compute(m, with_u);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("eigenpairs: shifted QR did not converge within " +
                               std::to_string(100 * n) + " iterations",
                           std::numeric_limits<double>::infinity());
  }
  return schur;
}

}  // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double frobenius(const CMatrix& m) { return m.norm(); }

cplx determinant(const CMatrix& m) {
  require_square(m, "determinant");
  return Eigen::PartialPivLU<CMatrix>(m).determinant();
}

CMatrix inverse(const CMatrix& m) {
  require_square(m, "inverse");
  Eigen::PartialPivLU<CMatrix> lu(m);
  const auto& lu_mat = lu.matrixLU();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < lu_mat.rows(); ++i) {
    if (std::abs(lu_mat(i, i)) <= 1e-14 * scale) {
      throw SingularityError("inverse: matrix is numerically singular (pivot " +
                             std::to_string(i) + ")");
    }
  }
  return lu.inverse();
}

CVector solve(const CMatrix& m, const CVector& rhs) {
  require_square(m, "solve");
  if (rhs.size() != m.rows()) throw DimensionError("solve: right-hand side size mismatch");
  Eigen::PartialPivLU<CMatrix> lu(m);
  const auto& lu_mat = lu.matrixLU();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < lu_mat.rows(); ++i) {
    if (std::abs(lu_mat(i, i)) <= 1e-14 * scale) {
      throw SingularityError("solve: matrix is numerically singular");
    }
  }
  return lu.solve(rhs);
}

std::vector<cplx> eigenvalues(const CMatrix& m) {
  require_square(m, "eigenvalues");
  auto schur = schur_of(m, false);
  const CMatrix& t = schur.matrixT();
  std::vector<cplx> out(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index i = 0; i < t.rows(); ++i) out[static_cast<std::size_t>(i)] = t(i, i);
  return out;
}

std::vector<EigenPair> eigenpairs(const CMatrix& m) {
  require_square(m, "eigenpairs");
  const Eigen::Index n = m.rows();
  auto schur = schur_of(m, true);
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();

  const double mnorm = frobenius(m);
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(mnorm, 1e-300);

  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(n));
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx lambda = t(k, k);
    CVector y = CVector::Zero(n);
    y(k) = 1.0;
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      cplx acc = 0.0;
      for (Eigen::Index j = i + 1; j <= k; ++j) acc += t(i, j) * y(j);
      cplx z = t(i, i) - lambda;
      if (z == cplx(0.0)) z = tiny;
      y(i) = -acc / z;
    }
    CVector v = u * y;
    v /= v.norm();
    const double res = (m * v - lambda * v).norm();
    worst = std::max(worst, res);
    out.push_back({lambda, std::move(v)});
  }
  if (worst > 1e-8 * std::max(mnorm, 1e-300)) {
    throw ConvergenceError("eigenpairs: eigenvector residual " + std::to_string(worst) +
                               " exceeds 1e-8*|m|_F (defective or ill-conditioned input)",
                           worst);
  }
  return out;
}

MatrixPolynomial::MatrixPolynomial(std::vector<CMatrix> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw DimensionError("MatrixPolynomial: no coefficients");
  for (const auto& c : coeffs_) {
    if (c.rows() != coeffs_.front().rows() || c.cols() != coeffs_.front().cols()) {
      throw DimensionError("MatrixPolynomial: coefficient shapes differ");
    }
  }
}

MatrixPolynomial MatrixPolynomial::zero(std::size_t degree, Eigen::Index rows,
                                        Eigen::Index cols) {
  return MatrixPolynomial(std::vector<CMatrix>(degree + 1, CMatrix::Zero(rows, cols)));
}

CMatrix MatrixPolynomial::operator()(cplx u) const {
  CMatrix acc = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    acc *= u;
    acc += coeffs_[k];
  }
  return acc;
}

CMatrix MatrixPolynomial::derivative(cplx u) const {
  if (coeffs_.size() < 2) return CMatrix::Zero(rows(), cols());
  const std::size_t d = coeffs_.size() - 1;
  CMatrix acc = static_cast<double>(d) * coeffs_[d];
  for (std::size_t k = d - 1; k >= 1; --k) {
    acc *= u;
    acc += static_cast<double>(k) * coeffs_[k];
  }
  return acc;
}

MatrixPolynomial& MatrixPolynomial::operator+=(const MatrixPolynomial& other) {
  if (other.rows() != rows() || other.cols() != cols()) {
    throw DimensionError("MatrixPolynomial: shape mismatch in addition");
  }
  if (other.coeffs_.size() > coeffs_.size()) {
    coeffs_.resize(other.coeffs_.size(), CMatrix::Zero(rows(), cols()));
  }
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

MatrixPolynomial& MatrixPolynomial::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

MatrixPolynomial poly_from_samples(std::span<const MatrixSample> samples,
                                   std::size_t degree) {
  const std::size_t n = samples.size();
  if (n < degree + 1) {
    throw DimensionError("poly_from_samples: need at least degree+1 samples");
  }
  const Eigen::Index rows = samples.front().value.rows();
  const Eigen::Index cols = samples.front().value.cols();
  double node_scale = 0.0;
  for (const auto& s : samples) {
    if (s.value.rows() != rows || s.value.cols() != cols) {
      throw DimensionError("poly_from_samples: sample shapes differ");
    }
    node_scale = std::max(node_scale, std::abs(s.node));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(samples[i].node - samples[j].node) <= 1e-12 * std::max(1.0, node_scale)) {
        throw NodeError("poly_from_samples: coincident nodes " + std::to_string(i) + " and " +
                        std::to_string(j));
      }
    }
  }

  std::vector<CMatrix> coeffs(degree + 1, CMatrix::Zero(rows, cols));
  if (n == degree + 1) {
    // Newton divided differences, then expanded to monomials by nested
    // multiplication; much better conditioned than summing Lagrange bases.
    std::vector<CMatrix> dd;
    dd.reserve(n);
    for (const auto& s : samples) dd.push_back(s.value);
    for (std::size_t level = 1; level < n; ++level) {
      for (std::size_t i = n - 1; i >= level; --i) {
        dd[i] = (dd[i] - dd[i - 1]) / (samples[i].node - samples[i - level].node);
      }
    }
    coeffs[0] = dd[n - 1];
    std::size_t len = 1;
    for (std::size_t k = n - 1; k-- > 0;) {
      // p <- p * (u - x_k) + dd[k]
      for (std::size_t p = len; p > 0; --p) coeffs[p] = coeffs[p - 1] - samples[k].node * coeffs[p];
      coeffs[0] = dd[k] - samples[k].node * coeffs[0];
      ++len;
    }
    return MatrixPolynomial(std::move(coeffs));
  }

  // Overdetermined: least squares on the Vandermonde system, all entries at once.
  const auto nn = static_cast<Eigen::Index>(n);
  const auto dd = static_cast<Eigen::Index>(degree + 1);
  CMatrix vander(nn, dd);
  CMatrix rhs(nn, rows * cols);
  for (Eigen::Index i = 0; i < nn; ++i) {
    cplx p = 1.0;
    for (Eigen::Index k = 0; k < dd; ++k) {
      vander(i, k) = p;
      p *= samples[static_cast<std::size_t>(i)].node;
    }
    rhs.row(i) = samples[static_cast<std::size_t>(i)].value.reshaped().transpose();
  }
  const CMatrix sol = vander.colPivHouseholderQr().solve(rhs);
  for (Eigen::Index k = 0; k < dd; ++k) {
    coeffs[static_cast<std::size_t>(k)] = sol.row(k).transpose().reshaped(rows, cols);
  }
  return MatrixPolynomial(std::move(coeffs));
}

std::vector<cplx> default_nodes(std::size_t degree, cplx c, std::span<const cplx> avoid) {
  std::vector<cplx> nodes(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) nodes[k] = static_cast<double>(k) * c;
  const double tol = 1e-9 * std::max(1.0, std::abs(c));
  const bool collides = std::any_of(nodes.begin(), nodes.end(), [&](cplx x) {
    return std::any_of(avoid.begin(), avoid.end(),
                       [&](cplx a) { return std::abs(x - a) <= tol; });
  });
  if (collides) {
    for (auto& x : nodes) x += 0.5 * c;
  }
  return nodes;
}

std::vector<cplx> circle_nodes(std::size_t degree, cplx center, double radius) {
  std::vector<cplx> nodes(degree + 1);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) {
    nodes[k] = center + std::polar(radius, step * static_cast<double>(k));
  }
  return nodes;
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Coeffs poly_add(const Coeffs& a, const Coeffs& b) {
  Coeffs out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Coeffs poly_scale(const Coeffs& a, cplx s) {
  Coeffs out(a);
  for (auto& x : out) x *= s;
  return out;
}

Coeffs poly_shift(const Coeffs& p, cplx shift) {
  // Horner in polynomial arithmetic: p(u+s) = (...(a_n (u+s) + a_{n-1})(u+s) ...).
  if (p.empty()) return {};
  Coeffs acc{p.back()};
  const Coeffs lin{shift, 1.0};
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    acc = poly_mul(acc, lin);
    acc[0] += p[k];
  }
  return acc;
}

cplx poly_eval(const Coeffs& p, cplx u) {
  cplx acc = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * u + p[k];
  return acc;
}

std::vector<cplx> poly_roots(const Coeffs& p) {
  std::size_t deg = p.size();
  while (deg > 0 && p[deg - 1] == cplx(0.0)) --deg;
  if (deg == 0) throw ParameterError("poly_roots: zero polynomial");
  --deg;
  if (deg == 0) return {};
  const cplx lead = p[deg];
  const auto n = static_cast<Eigen::Index>(deg);
  CMatrix companion = CMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    companion(i, n - 1) = -p[static_cast<std::size_t>(i)] / lead;
  }
  return eigenvalues(companion);
}

Coeffs poly_from_roots(std::span<const cplx> roots) {
  Coeffs out{1.0};
  for (cplx r : roots) out = poly_mul(out, Coeffs{-r, 1.0});
  return out;
}

}  // namespace maba
