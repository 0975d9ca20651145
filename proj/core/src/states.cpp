#include "maba/states.hpp"

#include <algorithm>
#include <numeric>

#include "maba/errors.hpp"

namespace maba {

namespace {

double rel(const CVector& lhs, const CVector& rhs) {
  return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

cplx ipow(cplx x, std::size_t n) {
  cplx r = 1.0;
  for (std::size_t k = 0; k < n; ++k) r *= x;
  return r;
}

// raising * B^{M+1}(u, set) + wanted * B^M(set) + sum_i unwanted[i] * B^M(u, set_i)
CVector assemble(const MonodromyFamily& nu, const OffShellDecomposition& d, cplx u,
                 const VariableSet& set) {
  CVector out = d.wanted * build_bethe_vector(nu, set).amplitudes;
  if (d.raising != cplx(0.0)) out += d.raising * build_bethe_vector(nu, set.prepend(u)).amplitudes;
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += d.unwanted[i] * build_bethe_vector(nu, set.without(i).prepend(u)).amplitudes;
  }
  return out;
}

RowVector assemble_dual(const MonodromyFamily& nu, const OffShellDecomposition& d, cplx u,
                        const VariableSet& set) {
  RowVector out = d.wanted * build_dual_vector(nu, set).amplitudes.transpose();
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += d.unwanted[i] * build_dual_vector(nu, set.without(i).prepend(u)).amplitudes.transpose();
  }
  return out;
}

}  // namespace

ChainOperators ChainOperators::build(const SpectralContext& ctx) {
  auto t = build_monodromy(ctx.chain);
  auto nu = build_modified_operators(t, ctx.factor);
  auto transfer = build_transfer(t, ctx.twist);
  return ChainOperators{std::move(t), std::move(nu), std::move(transfer)};
}

BetheVector build_bethe_vector(const MonodromyFamily& nu, const VariableSet& set) {
  const std::size_t n = nu.sites();
  CVector v = vacuum(n);
  for (std::size_t k = set.size(); k-- > 0;) v = nu.e12(set[k]) * v;
  return BetheVector{set, std::move(v), false, set.size() > n};
}

BetheVector build_dual_vector(const MonodromyFamily& nu, const VariableSet& set) {
  const std::size_t n = nu.sites();
  RowVector v = vacuum(n).transpose();
  for (cplx u : set) v = v * nu.e21(u);
  return BetheVector{set, v.transpose(), true, set.size() > n};
}

CVector raising_string(const MonodromyFamily& t, const VariableSet& set) {
  CVector v = vacuum(t.sites());
  for (std::size_t k = set.size(); k-- > 0;) v = t.e12(set[k]) * v;
  return v;
}

RowVector lowering_string(const MonodromyFamily& t, const VariableSet& set) {
  RowVector v = vacuum(t.sites()).transpose();
  for (cplx u : set) v = v * t.e21(u);
  return v;
}

OffShellDecomposition transfer_action(const SpectralContext& ctx, cplx u, const VariableSet& set) {
  OffShellDecomposition d;
  d.raising = ctx.factor.raising;
  d.wanted = eigenvalue_diagonal(ctx, u, set, ctx.d1(), ctx.d2());
  for (std::size_t i = 0; i < set.size(); ++i) {
    d.unwanted.push_back(kernel_g(set[i], u, ctx.c(), set.tolerance()) *
                         residual_diagonal(ctx, i, set, ctx.d1(), ctx.d2()));
  }
  return d;
}

OffShellDecomposition offshell_action(const SpectralContext& ctx, cplx u, const VariableSet& set) {
  OffShellDecomposition d;
  d.wanted = eigenvalue_lambda(ctx, u, set);
  for (std::size_t i = 0; i < set.size(); ++i) {
    d.unwanted.push_back(kernel_g(set[i], u, ctx.c(), set.tolerance()) *
                         bethe_residual(ctx, i, set));
  }
  return d;
}

OffShellDecomposition raising_decomposition(const SpectralContext& ctx, cplx u,
                                            const VariableSet& set) {
  OffShellDecomposition d;
  d.wanted = eigenvalue_inhomogeneous_part(ctx, u, set);
  for (std::size_t i = 0; i < set.size(); ++i) {
    d.unwanted.push_back(kernel_g(set[i], u, ctx.c(), set.tolerance()) *
                         residual_inhomogeneous_part(ctx, i, set));
  }
  return d;
}

cplx nu21_single_coefficient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                             std::size_t i) {
  const cplx c = ctx.c();
  const double tol = set.tolerance();
  const cplx ui = set[i];
  const auto rest = set.without(i);
  const auto wu = vacuum_weights(ctx, u);
  const auto wi = vacuum_weights(ctx, ui);
  return kernel_g(u, ui, c, tol) * wi.lambda1 * wu.lambda2 * f_prod(u, rest, c) *
             f_prod(rest, ui, c) +
         kernel_g(ui, u, c, tol) * wu.lambda1 * wi.lambda2 * f_prod(ui, rest, c) *
             f_prod(rest, u, c);
}

cplx nu21_pair_coefficient(const SpectralContext& ctx, cplx u, const VariableSet& set,
                           std::size_t i, std::size_t j) {
  const cplx c = ctx.c();
  const double tol = set.tolerance();
  const cplx ui = set[i], uj = set[j];
  const auto rest = set.without(i, j);
  const auto wi = vacuum_weights(ctx, ui);
  const auto wj = vacuum_weights(ctx, uj);
  return kernel_g(u, ui, c, tol) * kernel_g(uj, u, c, tol) * wj.lambda1 * wi.lambda2 *
             kernel_f(ui, uj, c, tol) * f_prod(ui, rest, c) * f_prod(rest, uj, c) +
         kernel_g(u, uj, c, tol) * kernel_g(ui, u, c, tol) * wi.lambda1 * wj.lambda2 *
             kernel_f(uj, ui, c, tol) * f_prod(uj, rest, c) * f_prod(rest, ui, c);
}

ResidualReport offshell_action_residuals(const ChainOperators& ops, const SpectralContext& ctx,
                                         cplx u, const VariableSet& set) {
  const cplx c = ctx.c();
  const double tol = set.tolerance();
  const std::size_t m = set.size();
  const auto& nu = ops.nu;
  const auto n = nu.at(u);
  const CVector b = build_bethe_vector(nu, set).amplitudes;
  const CVector raised = build_bethe_vector(nu, set.prepend(u)).amplitudes;
  std::vector<CVector> exchanged;
  for (std::size_t i = 0; i < m; ++i) {
    exchanged.push_back(build_bethe_vector(nu, set.without(i).prepend(u)).amplitudes);
  }
  const auto wu = vacuum_weights(ctx, u);
  const cplx r = ctx.factor.rho_over_kplus;

  ResidualReport out;
  out.push_back({"nu12_action", rel(n.m12 * b, raised)});

  CVector rhs11 = r * raised + wu.lambda1 * f_prod(set, u, c) * b;
  CVector rhs22 = r * raised + wu.lambda2 * f_prod(u, set, c) * b;
  for (std::size_t i = 0; i < m; ++i) {
    const cplx ui = set[i];
    const auto rest = set.without(i);
    const auto wi = vacuum_weights(ctx, ui);
    rhs11 += kernel_g(u, ui, c, tol) * wi.lambda1 * f_prod(rest, ui, c) * exchanged[i];
    rhs22 += kernel_g(ui, u, c, tol) * wi.lambda2 * f_prod(ui, rest, c) * exchanged[i];
  }
  out.push_back({"nu11_action", rel(n.m11 * b, rhs11)});
  out.push_back({"nu22_action", rel(n.m22 * b, rhs22)});

  CVector rhs21 = r * r * raised + r * eigenvalue_diagonal(ctx, u, set, 1.0, 1.0) * b;
  for (std::size_t i = 0; i < m; ++i) {
    rhs21 += r * kernel_g(set[i], u, c, tol) * residual_diagonal(ctx, i, set, 1.0, 1.0) *
             exchanged[i];
    rhs21 += nu21_single_coefficient(ctx, u, set, i) *
             build_bethe_vector(nu, set.without(i)).amplitudes;
    for (std::size_t j = i + 1; j < m; ++j) {
      rhs21 += nu21_pair_coefficient(ctx, u, set, i, j) *
               build_bethe_vector(nu, set.without(i, j).prepend(u)).amplitudes;
    }
  }
  out.push_back({"nu21_action", rel(n.m21 * b, rhs21)});

  const CVector tb = ops.transfer(u) * b;
  out.push_back({"transfer_action", rel(tb, assemble(nu, transfer_action(ctx, u, set), u, set))});
  if (m == ctx.sites()) {
    out.push_back({"transfer_offshell", rel(tb, assemble(nu, offshell_action(ctx, u, set), u, set))});
    const RowVector ct = build_dual_vector(nu, set).amplitudes.transpose() * ops.transfer(u);
    const RowVector rhs = assemble_dual(nu, offshell_action(ctx, u, set), u, set);
    out.push_back({"dual_transfer_offshell",
                   (ct - rhs).norm() / std::max(1.0, static_cast<double>(ct.norm()))});
  }
  return out;
}

ResidualReport string_action_residuals(const ChainOperators& ops, const SpectralContext& ctx,
                                       cplx u, const VariableSet& set) {
  const cplx c = ctx.c();
  const double tol = set.tolerance();
  const std::size_t m = set.size();
  const auto t = ops.t.at(u);
  const CVector s = raising_string(ops.t, set);
  const auto wu = vacuum_weights(ctx, u);

  CVector rhs11 = f_prod(set, u, c) * wu.lambda1 * s;
  CVector rhs22 = f_prod(u, set, c) * wu.lambda2 * s;
  CVector rhs21 = CVector::Zero(s.size());
  for (std::size_t i = 0; i < m; ++i) {
    const cplx vi = set[i];
    const auto rest = set.without(i);
    const auto wi = vacuum_weights(ctx, vi);
    const CVector swapped = raising_string(ops.t, rest.prepend(u));
    rhs11 += kernel_g(u, vi, c, tol) * f_prod(rest, vi, c) * wi.lambda1 * swapped;
    rhs22 += kernel_g(vi, u, c, tol) * f_prod(vi, rest, c) * wi.lambda2 * swapped;
    rhs21 += nu21_single_coefficient(ctx, u, set, i) * raising_string(ops.t, rest);
    for (std::size_t j = i + 1; j < m; ++j) {
      rhs21 += nu21_pair_coefficient(ctx, u, set, i, j) *
               raising_string(ops.t, set.without(i, j).prepend(u));
    }
  }
  ResidualReport out;
  out.push_back({"t11_string", rel(t.m11 * s, rhs11)});
  out.push_back({"t22_string", rel(t.m22 * s, rhs22)});
  out.push_back({"t21_string", rel(t.m21 * s, rhs21)});
  return out;
}

double raising_identity_residual(const ChainOperators& ops, const SpectralContext& ctx, cplx u,
                                 const VariableSet& set) {
  if (set.size() != ctx.sites()) {
    throw ArityError("raising identity needs exactly N = " + std::to_string(ctx.sites()) +
                     " parameters, got " + std::to_string(set.size()));
  }
  const CVector lhs = ctx.factor.raising * build_bethe_vector(ops.nu, set.prepend(u)).amplitudes;
  return rel(lhs, assemble(ops.nu, raising_decomposition(ctx, u, set), u, set));
}

ResidualReport eigenstate_residuals(const ChainOperators& ops, const SpectralContext& ctx,
                                    const VariableSet& set, const std::vector<cplx>& probes) {
  const CVector b = build_bethe_vector(ops.nu, set).amplitudes;
  const RowVector cdual = build_dual_vector(ops.nu, set).amplitudes.transpose();
  ResidualReport out;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const cplx u = probes[k];
    const cplx lam = eigenvalue_lambda(ctx, u, set);
    const CMatrix tu = ops.transfer(u);
    const CVector lb = lam * b;
    const RowVector lc = lam * cdual;
    out.push_back({"eigen_ket_" + std::to_string(k),
                   (tu * b - lb).norm() / std::max(lb.norm(), 1e-300)});
    out.push_back({"eigen_dual_" + std::to_string(k),
                   (cdual * tu - lc).norm() / std::max(static_cast<double>(lc.norm()), 1e-300)});
  }
  return out;
}

cplx projection_coefficient(const SpectralContext& ctx, const VariableSet& first,
                            const VariableSet& second) {
  if (first.empty()) return 1.0;
  const cplx c = ctx.c();
  std::vector<std::size_t> perm(first.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  cplx total = 0.0;
  std::size_t count = 0;
  do {
    std::vector<cplx> seq;
    for (std::size_t p : perm) seq.push_back(first[p]);
    seq.insert(seq.end(), second.begin(), second.end());
    cplx term = 1.0;
    for (std::size_t j = 0; j < first.size(); ++j) {
      const VariableSet tail(std::vector<cplx>(seq.begin() + static_cast<long>(j) + 1, seq.end()),
                             first.tolerance());
      const auto w = vacuum_weights(ctx, seq[j]);
      // W^{k}_{k-1}(u_j | tail) = Lambda_d(u_j, tail | 1, 1)
      term *= f_prod(tail, seq[j], c) * w.lambda1 + f_prod(seq[j], tail, c) * w.lambda2;
    }
    total += term;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / static_cast<double>(count);
}

cplx w0_coefficient(const SpectralContext& ctx, const VariableSet& set) {
  return projection_coefficient(ctx, set, VariableSet({}, set.tolerance()));
}

ProjectionExpansion projection_expansion(const ChainOperators& ops, const SpectralContext& ctx,
                                         const VariableSet& set) {
  const std::size_t m = set.size();
  if (m > 16) throw ArityError("projection_expansion: too many parameters");
  const auto dim = static_cast<Eigen::Index>(ctx.chain.dimension());
  const cplx mu_m = ipow(ctx.factor.mu, m);

  ProjectionExpansion out;
  out.ket = CVector::Zero(dim);
  out.dual = RowVector::Zero(dim);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    ProjectionTerm term;
    std::vector<cplx> first, second;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (std::size_t{1} << k)) {
        term.second.push_back(k);
        second.push_back(set[k]);
      } else {
        term.first.push_back(k);
        first.push_back(set[k]);
      }
    }
    const VariableSet vi(first, set.tolerance()), vii(second, set.tolerance());
    term.weight = projection_coefficient(ctx, vi, vii);
    const std::size_t lowered = first.size();
    out.ket += mu_m * ipow(ctx.factor.rho_over_kminus, lowered) * term.weight *
               raising_string(ops.t, vii);
    out.dual += mu_m * ipow(ctx.factor.rho_over_kplus, lowered) * term.weight *
                lowering_string(ops.t, vii);
    if (term.second.empty()) out.w0_expansion = term.weight;
    out.terms.push_back(std::move(term));
  }

  const CVector direct = build_bethe_vector(ops.nu, set).amplitudes;
  const RowVector direct_dual = build_dual_vector(ops.nu, set).amplitudes.transpose();
  out.ket_residual = (out.ket - direct).norm() / std::max(1.0, direct.norm());
  out.dual_residual =
      (out.dual - direct_dual).norm() / std::max(1.0, static_cast<double>(direct_dual.norm()));

  if (!ctx.factor.diagonal) {
    const cplx scale = 1.0 / (ctx.factor.mu * ctx.factor.rho_over_kminus);
    out.w0_direct = ipow(scale, m) * direct(0);
    out.w0_difference =
        std::abs(*out.w0_direct - out.w0_expansion) / std::max(1.0, std::abs(*out.w0_direct));
  }
  return out;
}

}  // namespace maba
