#include "maba/overlaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maba/errors.hpp"

namespace maba {

namespace {

cplx ipow(cplx x, std::size_t n) {
  cplx r = 1.0;
  for (std::size_t k = 0; k < n; ++k) r *= x;
  return r;
}

// mu^2 / (kt + k - rho)
cplx norm_constant(const SpectralContext& ctx) {
  const auto& f = ctx.factor;
  return f.mu * f.mu / (ctx.twist.kappa_tilde + ctx.twist.kappa - f.rho);
}

CMatrix cauchy(const SpectralContext& ctx, const VariableSet& a, const VariableSet& b) {
  const auto n = static_cast<Eigen::Index>(a.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = kernel_g(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)], ctx.c(),
                         ctx.eps_dist());
    }
  }
  return m;
}

void require_same_size(const VariableSet& u, const VariableSet& v) {
  if (u.size() != v.size()) throw ArityError("scalar product needs #u == #v");
}

void require_disjoint(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v) {
  for (cplx a : u) {
    for (cplx b : v) {
      if (std::abs(a - b) <= ctx.eps_dist()) throw CoincidenceError("u and v share a parameter");
    }
  }
}

}  // namespace

const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::u_onshell: return "u-onshell";
    case Orientation::v_onshell: return "v-onshell";
    case Orientation::norm: return "norm";
  }
  return "?";
}

double relative_error(cplx a, cplx b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

cplx scalar_direct(const BetheVector& dual, const BetheVector& ket) {
  if (dual.amplitudes.size() != ket.amplitudes.size()) {
    throw DimensionError("scalar_direct: dimension mismatch");
  }
  // Bilinear: the dual is stored as a column, not conjugated.
  return (dual.amplitudes.transpose() * ket.amplitudes)(0, 0);
}

void require_onshell(const SpectralContext& ctx, const VariableSet& set, double tol) {
  const auto res = bethe_residuals(ctx, set);
  const double tau = onshell_threshold(ctx, set, tol);
  double worst = 0.0;
  for (cplx e : res) worst = std::max(worst, std::abs(e));
  if (worst > tau) {
    std::ostringstream msg;
    msg << "set is not on-shell: residuals";
    for (cplx e : res) msg << ' ' << std::abs(e);
    msg << " exceed " << tau;
    throw PreconditionError(msg.str());
  }
}

CMatrix slavnov_jacobian(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v,
                         Orientation o) {
  require_same_size(u, v);
  const std::size_t n = u.size();
  const VariableSet& on = o == Orientation::v_onshell ? v : u;
  const VariableSet& off = o == Orientation::v_onshell ? u : v;
  CMatrix j(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          eigenvalue_gradient(ctx, off[b], on, a);
    }
  }
  return j;
}

cplx slavnov_formula(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v,
                     Orientation o, double tol) {
  if (o == Orientation::norm) return gaudin_norm(ctx, u, tol);
  require_same_size(u, v);
  require_disjoint(ctx, u, v);
  const VariableSet& on = o == Orientation::v_onshell ? v : u;
  const VariableSet& off = o == Orientation::v_onshell ? u : v;
  require_onshell(ctx, on, tol);
  const std::size_t n = u.size();
  const cplx pref = ipow(ctx.c() * norm_constant(ctx), n) * w0_coefficient(ctx, on);
  return pref * determinant(slavnov_jacobian(ctx, u, v, o)) / determinant(cauchy(ctx, off, on));
}

CMatrix gaudin_matrix(const SpectralContext& ctx, const VariableSet& u) {
  const std::size_t n = u.size();
  const cplx c = ctx.c();
  const cplx rho = ctx.factor.rho;
  const cplx sign = n % 2 == 0 ? 1.0 : -1.0;
  CMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ui = u[i];
    const VariableSet rest = u.without(i);
    const auto w = vacuum_weights(ctx, ui);
    const auto dw = vacuum_weight_derivatives(ctx, ui);
    cplx sum1 = 0.0, sum2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const VariableSet rest2 = u.without(i, j);
      sum1 += h_prod(rest2, ui, c);
      sum2 += h_prod(ui, rest2, c);
    }
    g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        2.0 * rho * c * (w.lambda2 * dw.lambda1 + w.lambda1 * dw.lambda2) +
        sign * ctx.d1() * (c * h_prod(rest, ui, c) * dw.lambda1 - w.lambda1 * sum1) +
        ctx.d2() * (c * h_prod(ui, rest, c) * dw.lambda2 + w.lambda2 * sum2);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const cplx uj = u[j];
      const VariableSet rest2 = u.without(i, j);
      const auto wj = vacuum_weights(ctx, uj);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          sign * ctx.d1() * wj.lambda1 * h_prod(rest2, uj, c) -
          ctx.d2() * wj.lambda2 * h_prod(uj, rest2, c);
    }
  }
  return g;
}

cplx gaudin_norm(const SpectralContext& ctx, const VariableSet& u, double tol) {
  require_onshell(ctx, u, tol);
  const std::size_t n = u.size();
  const cplx c = ctx.c();
  cplx pairs = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs *= kernel_g(u[i], u[j], c, ctx.eps_dist()) * kernel_g(u[j], u[i], c, ctx.eps_dist());
    }
  }
  return ipow(norm_constant(ctx), n) * w0_coefficient(ctx, u) * pairs *
         determinant(gaudin_matrix(ctx, u));
}

LimitCheck gaudin_limit_check(const SpectralContext& ctx, const VariableSet& u,
                              std::array<double, 2> eps) {
  const std::size_t n = u.size();
  const cplx c = ctx.c();
  auto at = [&](double e) {
    CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const cplx vj = u[j] + e;
      const cplx gv = g_prod(vj, u, c);
      for (std::size_t i = 0; i < n; ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            c * eigenvalue_gradient(ctx, vj, u, i) / gv;
      }
    }
    return m;
  };
  LimitCheck out;
  out.gaudin = gaudin_matrix(ctx, u);
  const CMatrix a = at(eps[0]);
  const CMatrix b = at(eps[1]);
  // Both carry an O(eps) error; eliminate it.
  out.extrapolated = (eps[0] * b - eps[1] * a) / (eps[0] - eps[1]);
  const double scale = std::max(out.gaudin.cwiseAbs().maxCoeff(), 1e-30);
  out.relative_error = (out.extrapolated - out.gaudin).cwiseAbs().maxCoeff() / scale;
  return out;
}

NormLimitCheck norm_limit_check(const SpectralContext& ctx, const VariableSet& u, double eps,
                                double tol) {
  auto shifted = [&](double e) {
    std::vector<cplx> v(u.values());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += e * static_cast<double>(k + 1);
    return slavnov_formula(ctx, u, VariableSet(v, 0.0), Orientation::u_onshell, tol);
  };
  NormLimitCheck out;
  out.norm = gaudin_norm(ctx, u, tol);
  out.limit = 2.0 * shifted(eps) - shifted(2.0 * eps);
  out.relative_error = relative_error(out.norm, out.limit);
  return out;
}

OverlapReport slavnov_report(const ChainOperators& ops, const SpectralContext& ctx,
                             const VariableSet& u, const VariableSet& v, Orientation o,
                             double tol) {
  OverlapReport r;
  r.orientation = o;
  r.direct = scalar_direct(build_dual_vector(ops.nu, u), build_bethe_vector(ops.nu, v));
  r.formula = slavnov_formula(ctx, u, v, o, tol);
  r.relative_error = relative_error(r.direct, r.formula);
  return r;
}

OverlapReport norm_report(const ChainOperators& ops, const SpectralContext& ctx,
                          const VariableSet& u, double tol) {
  OverlapReport r;
  r.orientation = Orientation::norm;
  r.direct = scalar_direct(build_dual_vector(ops.nu, u), build_bethe_vector(ops.nu, u));
  r.formula = gaudin_norm(ctx, u, tol);
  r.relative_error = relative_error(r.direct, r.formula);
  return r;
}

double normalized_overlap(const ChainOperators& ops, const VariableSet& a, const VariableSet& b) {
  const auto dual = build_dual_vector(ops.nu, a);
  const auto ket = build_bethe_vector(ops.nu, b);
  const double scale = dual.amplitudes.norm() * ket.amplitudes.norm();
  return std::abs(scalar_direct(dual, ket)) / std::max(scale, 1e-300);
}

CMatrix spectral_projector(const ChainOperators& ops, const SpectralContext& ctx,
                           const VariableSet& u, double tol) {
  const auto dual = build_dual_vector(ops.nu, u);
  const auto ket = build_bethe_vector(ops.nu, u);
  return ket.amplitudes * dual.amplitudes.transpose() / gaudin_norm(ctx, u, tol);
}

N1Reference n1_reference(const ChainOperators& ops, const SpectralContext& ctx, cplx u, cplx v,
                         double tol) {
  if (ctx.sites() != 1) throw ArityError("n1_reference needs a single site");
  const cplx c = ctx.c();
  const auto& f = ctx.factor;
  const auto wu = vacuum_weights(ctx, u);
  const auto wv = vacuum_weights(ctx, v);
  const cplx w0u = wu.lambda1 + wu.lambda2;
  const cplx w0v = wv.lambda1 + wv.lambda2;
  const cplx sd = kernel_g(u, v, c, ctx.eps_dist()) *
                  (wv.lambda1 * wu.lambda2 - wu.lambda1 * wv.lambda2);
  const cplx lg_uv = eigenvalue_inhomogeneous_part(ctx, u, VariableSet{v});
  const cplx lg_vu = eigenvalue_inhomogeneous_part(ctx, v, VariableSet{u});
  const cplx k = norm_constant(ctx) / f.mu;  // mu / (kt + k - rho)

  N1Reference r;
  r.direct = scalar_direct(build_dual_vector(ops.nu, VariableSet{u}),
                           build_bethe_vector(ops.nu, VariableSet{v}));
  r.parametrization = f.mu * (sd + k * (lg_uv * w0v + lg_vu * w0u));
  r.alternative = f.mu * f.mu * (sd + f.rho_over_kplus * f.rho_over_kminus * w0u * w0v);
  r.parametrization_error = relative_error(r.direct, r.parametrization);
  r.alternative_error = relative_error(r.direct, r.alternative);

  const VariableSet vs{v};
  if (std::abs(bethe_residual(ctx, 0, vs)) <= onshell_threshold(ctx, vs, tol)) {
    r.linearized = norm_constant(ctx) * kernel_g(v, u, c, ctx.eps_dist()) * w0v *
                   (ctx.d1() * wu.lambda1 - ctx.d2() * wu.lambda2 -
                    2.0 * f.rho * wu.lambda1 * wu.lambda2);
    r.linearized_error = relative_error(r.direct, *r.linearized);
  }
  return r;
}

SimpleAbaReport simple_aba_check(const SpectralContext& ctx, const MatrixPolynomial& transfer,
                                 const std::vector<BetheSolution>& solutions,
                                 const std::vector<cplx>& probes, double tol) {
  SimpleAbaReport r;
  r.alpha = twist_alpha(ctx.twist);
  const cplx other = ctx.twist.kappa + ctx.twist.kappa_tilde - r.alpha;
  std::vector<double> gaps(solutions.size(), 0.0);
  for (cplx p : probes) {
    const auto w = vacuum_weights(ctx, p);
    const cplx branch = r.alpha * w.lambda1 + other * w.lambda2;
    const double scale = std::max(1.0, std::abs(branch));
    double best = std::numeric_limits<double>::infinity();
    for (cplx e : eigenvalues(transfer(p))) best = std::min(best, std::abs(e - branch) / scale);
    r.spectrum_gap = std::max(r.spectrum_gap, best);
    for (std::size_t s = 0; s < solutions.size(); ++s) {
      double gap = std::numeric_limits<double>::infinity();
      try {
        gap = std::abs(eigenvalue_lambda(ctx, p, solutions[s].roots) - branch) / scale;
      } catch (const CoincidenceError&) {
      }
      gaps[s] = std::max(gaps[s], gap);
    }
  }
  // Roots carry the solver's accuracy, so the match is looser than the
  // spectrum test.
  const double match_tol = std::max(tol, 1e-7);
  for (std::size_t s = 0; s < solutions.size(); ++s) {
    if (!r.matched_solution || gaps[s] < r.match_gap) {
      r.matched_solution = s;
      r.match_gap = gaps[s];
    }
  }
  if (r.matched_solution && r.match_gap > match_tol) r.matched_solution.reset();
  return r;
}

cplx classical_slavnov(const SpectralContext& ctx, const VariableSet& u, const VariableSet& v,
                       double tol) {
  require_same_size(u, v);
  require_disjoint(ctx, u, v);
  const cplx kt = ctx.twist.kappa_tilde;
  const cplx k = ctx.twist.kappa;
  const std::size_t m = v.size();
  double scale = 1.0, worst = 0.0;
  cplx l2 = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto w = vacuum_weights(ctx, v[i]);
    scale = std::max(scale, std::abs(w.lambda1 * w.lambda2));
    worst = std::max(worst, std::abs(residual_diagonal(ctx, i, v, kt, k)));
    l2 *= w.lambda2;
  }
  if (worst > tol * scale) {
    throw PreconditionError("classical_slavnov: v is not on-shell for the diagonal equations");
  }
  CMatrix jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          eigenvalue_diagonal_gradient(ctx, u[j], v, i, kt, k);
    }
  }
  return ipow(ctx.c() / kt, m) * l2 * determinant(jac) / determinant(cauchy(ctx, u, v));
}

std::vector<cplx> default_probes(const SpectralContext& ctx, std::size_t count) {
  const cplx center = start_disk(ctx).center;
  std::vector<cplx> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double kk = static_cast<double>(k);
    out.push_back(center + ctx.c() * std::polar(0.35 + 0.3 * kk, 0.7 + 1.9 * kk));
  }
  return out;
}

}  // namespace maba
