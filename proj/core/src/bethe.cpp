#include "maba/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maba/errors.hpp"

namespace maba {

namespace {

void check_distinct(cplx u, cplx v, double tol) {
  if (std::abs(u - v) <= tol) {
    throw CoincidenceError("spectral parameters coincide: |u - v| = " +
                           std::to_string(std::abs(u - v)) + " <= " + std::to_string(tol));
  }
}

// sum_k dphi_k prod_{l != k} phi_l, without dividing by phi_k.
cplx product_derivative(const std::vector<cplx>& phi, const std::vector<cplx>& dphi) {
  cplx total = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    cplx term = dphi[k];
    for (std::size_t l = 0; l < phi.size(); ++l) {
      if (l != k) term *= phi[l];
    }
    total += term;
  }
  return total;
}

cplx product(const std::vector<cplx>& phi) {
  cplx p = 1.0;
  for (cplx x : phi) p *= x;
  return p;
}

}  // namespace

VariableSet::VariableSet(std::vector<cplx> values, double tolerance)
    : values_(std::move(values)), tolerance_(tolerance) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw ParameterError("VariableSet: non-finite entry");
    }
    for (std::size_t j = i + 1; j < values_.size(); ++j) {
      if (std::abs(values_[i] - values_[j]) <= tolerance_) {
        throw CoincidenceError("VariableSet: entries " + std::to_string(i) + " and " +
                               std::to_string(j) + " coincide");
      }
    }
  }
}

VariableSet::VariableSet(std::initializer_list<cplx> values)
    : VariableSet(std::vector<cplx>(values)) {}

VariableSet VariableSet::without(std::size_t i) const {
  std::vector<cplx> out;
  out.reserve(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (k != i) out.push_back(values_[k]);
  }
  return VariableSet(std::move(out), tolerance_);
}

VariableSet VariableSet::without(std::size_t i, std::size_t j) const {
  std::vector<cplx> out;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (k != i && k != j) out.push_back(values_[k]);
  }
  return VariableSet(std::move(out), tolerance_);
}

VariableSet VariableSet::prepend(cplx u) const {
  std::vector<cplx> out;
  out.reserve(values_.size() + 1);
  out.push_back(u);
  out.insert(out.end(), values_.begin(), values_.end());
  return VariableSet(std::move(out), tolerance_);
}

VariableSet VariableSet::canonical() const {
  std::vector<cplx> out(values_);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return VariableSet(std::move(out), tolerance_);
}

VariableSet VariableSet::with_value(std::size_t i, cplx u) const {
  std::vector<cplx> out(values_);
  out.at(i) = u;
  return VariableSet(std::move(out), tolerance_);
}

Kernels kernels(cplx u, cplx v, cplx c, double tol) {
  check_distinct(u, v, tol);
  const cplx g = c / (u - v);
  return {g, 1.0 + g, (u - v + c) / c};
}

cplx kernel_g(cplx u, cplx v, cplx c, double tol) {
  check_distinct(u, v, tol);
  return c / (u - v);
}

cplx kernel_f(cplx u, cplx v, cplx c, double tol) {
  check_distinct(u, v, tol);
  return 1.0 + c / (u - v);
}

cplx kernel_h(cplx u, cplx v, cplx c) { return (u - v + c) / c; }

cplx f_prod(const VariableSet& set, cplx u, cplx c) {
  cplx p = 1.0;
  for (cplx x : set) p *= kernel_f(x, u, c, set.tolerance());
  return p;
}

cplx f_prod(cplx u, const VariableSet& set, cplx c) {
  cplx p = 1.0;
  for (cplx x : set) p *= kernel_f(u, x, c, set.tolerance());
  return p;
}

cplx g_prod(const VariableSet& set, cplx u, cplx c) {
  cplx p = 1.0;
  for (cplx x : set) p *= kernel_g(x, u, c, set.tolerance());
  return p;
}

cplx g_prod(cplx u, const VariableSet& set, cplx c) {
  cplx p = 1.0;
  for (cplx x : set) p *= kernel_g(u, x, c, set.tolerance());
  return p;
}

cplx h_prod(const VariableSet& set, cplx u, cplx c) {
  cplx p = 1.0;
  for (cplx x : set) p *= kernel_h(x, u, c);
  return p;
}

cplx h_prod(cplx u, const VariableSet& set, cplx c) {
  cplx p = 1.0;
  for (cplx x : set) p *= kernel_h(u, x, c);
  return p;
}

cplx f_prod(const VariableSet& a, const VariableSet& b, cplx c) {
  cplx p = 1.0;
  for (cplx y : b) p *= f_prod(a, y, c);
  return p;
}

cplx g_prod(const VariableSet& a, const VariableSet& b, cplx c) {
  cplx p = 1.0;
  for (cplx y : b) p *= g_prod(a, y, c);
  return p;
}

SpectralContext SpectralContext::make(ChainParams chain, TwistParams twist, RhoBranch branch) {
  chain.validate();
  auto factor = factorize(twist, branch);
  return SpectralContext{std::move(chain), twist, std::move(factor)};
}

double SpectralContext::eps_dist() const { return 1e-9 * std::max(1.0, std::abs(chain.c)); }

VariableSet SpectralContext::variables(std::vector<cplx> values) const {
  return VariableSet(std::move(values), eps_dist());
}

VacuumWeights vacuum_weights(const SpectralContext& ctx, cplx u) {
  const cplx c = ctx.c();
  cplx l1 = 1.0, l2 = 1.0;
  for (cplx th : ctx.chain.inhomogeneities) {
    l1 *= (u - th + c) / c;
    l2 *= (u - th) / c;
  }
  return {l1, l2};
}

VacuumWeights vacuum_weight_derivatives(const SpectralContext& ctx, cplx u) {
  const cplx c = ctx.c();
  std::vector<cplx> a, b, d;
  for (cplx th : ctx.chain.inhomogeneities) {
    a.push_back((u - th + c) / c);
    b.push_back((u - th) / c);
    d.push_back(1.0 / c);
  }
  return {product_derivative(a, d), product_derivative(b, d)};
}

std::pair<Coeffs, Coeffs> vacuum_weight_polynomials(const SpectralContext& ctx) {
  const cplx c = ctx.c();
  Coeffs l1{1.0}, l2{1.0};
  for (cplx th : ctx.chain.inhomogeneities) {
    l1 = poly_mul(l1, Coeffs{(c - th) / c, 1.0 / c});
    l2 = poly_mul(l2, Coeffs{-th / c, 1.0 / c});
  }
  return {l1, l2};
}

cplx eigenvalue_diagonal(const SpectralContext& ctx, cplx u, const VariableSet& set, cplx x,
                         cplx y) {
  const auto w = vacuum_weights(ctx, u);
  const cplx c = ctx.c();
  return x * f_prod(set, u, c) * w.lambda1 + y * f_prod(u, set, c) * w.lambda2;
}

cplx residual_diagonal(const SpectralContext& ctx, std::size_t i, const VariableSet& set, cplx x,
                       cplx y) {
  const cplx ui = set[i];
  const auto rest = set.without(i);
  const auto w = vacuum_weights(ctx, ui);
  const cplx c = ctx.c();
  return -x * f_prod(rest, ui, c) * w.lambda1 + y * f_prod(ui, rest, c) * w.lambda2;
}

cplx eigenvalue_inhomogeneous_part(const SpectralContext& ctx, cplx u, const VariableSet& set) {
  const auto w = vacuum_weights(ctx, u);
  return 2.0 * ctx.factor.rho * w.lambda1 * w.lambda2 * g_prod(u, set, ctx.c());
}

cplx residual_inhomogeneous_part(const SpectralContext& ctx, std::size_t i,
                                 const VariableSet& set) {
  const cplx ui = set[i];
  const auto w = vacuum_weights(ctx, ui);
  return 2.0 * ctx.factor.rho * w.lambda1 * w.lambda2 * g_prod(ui, set.without(i), ctx.c());
}

cplx eigenvalue_lambda(const SpectralContext& ctx, cplx u, const VariableSet& set) {
  return eigenvalue_diagonal(ctx, u, set, ctx.d1(), ctx.d2()) +
         eigenvalue_inhomogeneous_part(ctx, u, set);
}

cplx bethe_residual(const SpectralContext& ctx, std::size_t i, const VariableSet& set) {
  if (i >= set.size()) throw ArityError("bethe_residual: index out of range");
  return residual_diagonal(ctx, i, set, ctx.d1(), ctx.d2()) +
         residual_inhomogeneous_part(ctx, i, set);
}

std::vector<cplx> bethe_residuals(const SpectralContext& ctx, const VariableSet& set) {
  std::vector<cplx> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = bethe_residual(ctx, i, set);
  return out;
}

cplx eigenvalue_diagonal_gradient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                                  std::size_t i, cplx x, cplx y) {
  if (i >= set.size()) throw ArityError("eigenvalue_gradient: index out of range");
  const cplx c = ctx.c();
  const cplx ui = set[i];
  check_distinct(u, ui, set.tolerance());
  const auto w = vacuum_weights(ctx, u);
  const auto rest = set.without(i);
  const cplx d2 = c / ((u - ui) * (u - ui));
  // d/du_i f(u_i, u) = -c/(u_i - u)^2, d/du_i f(u, u_i) = c/(u - u_i)^2
  return x * w.lambda1 * (-d2) * f_prod(rest, u, c) + y * w.lambda2 * d2 * f_prod(u, rest, c);
}

cplx eigenvalue_gradient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                         std::size_t i) {
  const cplx diag = eigenvalue_diagonal_gradient(ctx, u, set, i, ctx.d1(), ctx.d2());
  const cplx c = ctx.c();
  const cplx ui = set[i];
  const auto w = vacuum_weights(ctx, u);
  // d/du_i g(u, u_i) = c/(u - u_i)^2
  const cplx inh = 2.0 * ctx.factor.rho * w.lambda1 * w.lambda2 * c / ((u - ui) * (u - ui)) *
                   g_prod(u, set.without(i), c);
  return diag + inh;
}

CMatrix bethe_jacobian(const SpectralContext& ctx, const VariableSet& set) {
  const std::size_t m = set.size();
  const cplx c = ctx.c();
  const cplx a = ctx.d1(), b = ctx.d2(), rho2 = 2.0 * ctx.factor.rho;
  const auto n = static_cast<Eigen::Index>(m);
  CMatrix jac = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx ui = set[i];
    const auto w = vacuum_weights(ctx, ui);
    const auto dw = vacuum_weight_derivatives(ctx, ui);
    const cplx A = a * w.lambda1, B = b * w.lambda2, C = rho2 * w.lambda1 * w.lambda2;
    const cplx dA = a * dw.lambda1, dB = b * dw.lambda2,
               dC = rho2 * (dw.lambda1 * w.lambda2 + w.lambda1 * dw.lambda2);

    std::vector<cplx> p1, p2, p3;  // f(u_k, u_i), f(u_i, u_k), g(u_i, u_k)
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      const cplx uk = set[k];
      check_distinct(ui, uk, set.tolerance());
      p1.push_back(1.0 + c / (uk - ui));
      p2.push_back(1.0 + c / (ui - uk));
      p3.push_back(c / (ui - uk));
      idx.push_back(k);
    }
    // Derivatives with respect to u_i of each factor.
    std::vector<cplx> d1i, d2i, d3i;
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const cplx uk = set[idx[q]];
      const cplx s = c / ((ui - uk) * (ui - uk));
      d1i.push_back(s);   // d/du_i [1 + c/(u_k - u_i)]
      d2i.push_back(-s);  // d/du_i [1 + c/(u_i - u_k)]
      d3i.push_back(-s);  // d/du_i [c/(u_i - u_k)]
    }
    jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        -dA * product(p1) - A * product_derivative(p1, d1i) + dB * product(p2) +
        B * product_derivative(p2, d2i) + dC * product(p3) + C * product_derivative(p3, d3i);

    for (std::size_t q = 0; q < idx.size(); ++q) {
      const cplx uk = set[idx[q]];
      const cplx s = c / ((ui - uk) * (ui - uk));
      std::vector<cplx> z(idx.size(), 0.0);
      std::vector<cplx> e1 = z, e2 = z, e3 = z;
      e1[q] = -s;  // d/du_k [1 + c/(u_k - u_i)]
      e2[q] = s;   // d/du_k [1 + c/(u_i - u_k)]
      e3[q] = s;   // d/du_k [c/(u_i - u_k)]
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(idx[q])) =
          -A * product_derivative(p1, e1) + B * product_derivative(p2, e2) +
          C * product_derivative(p3, e3);
    }
  }
  return jac;
}

double tq_polynomial_residual(const SpectralContext& ctx, const Coeffs& lambda, const Coeffs& q) {
  if (q.size() != ctx.sites() + 1) {
    throw ArityError("tq_polynomial_residual: deg Q must equal the number of sites");
  }
  const cplx c = ctx.c();
  const auto [l1, l2] = vacuum_weight_polynomials(ctx);
  Coeffs diff = poly_mul(lambda, q);
  diff = poly_add(diff, poly_scale(poly_mul(l1, poly_shift(q, -c)), -ctx.d1()));
  diff = poly_add(diff, poly_scale(poly_mul(l2, poly_shift(q, c)), -ctx.d2()));
  const cplx cn = std::pow(c, static_cast<int>(ctx.sites()));
  diff = poly_add(diff, poly_scale(poly_mul(l1, l2), -2.0 * ctx.factor.rho * cn));
  double worst = 0.0;
  for (cplx x : diff) worst = std::max(worst, std::abs(x));
  return worst;
}

cplx tq_eigenvalue(const SpectralContext& ctx, cplx u, const Coeffs& q) {
  const cplx c = ctx.c();
  const auto w = vacuum_weights(ctx, u);
  const cplx cn = std::pow(c, static_cast<int>(q.size() - 1));
  return (ctx.d1() * w.lambda1 * poly_eval(q, u - c) + ctx.d2() * w.lambda2 * poly_eval(q, u + c) +
          2.0 * ctx.factor.rho * cn * w.lambda1 * w.lambda2) /
         poly_eval(q, u);
}

}  // namespace maba
