#include "maba/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "maba/errors.hpp"

namespace maba {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (cplx x : v) m = std::max(m, std::abs(x));
  return m;
}

bool canonical_less(const VariableSet& a, const VariableSet& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

std::vector<cplx> residual_vector(const SpectralContext& ctx, const std::vector<cplx>& x) {
  return bethe_residuals(ctx, VariableSet(x, ctx.eps_dist()));
}

// Keeps the first of every group of solutions within `tol`; near-duplicates
// (within 100 tol) are flagged, not merged.
std::vector<BetheSolution> deduplicate(std::vector<BetheSolution> sols, double tol) {
  std::vector<BetheSolution> kept;
  for (auto& s : sols) {
    bool dup = false;
    for (auto& k : kept) {
      const double d = root_distance(s.roots, k.roots);
      if (d <= tol) {
        dup = true;
        break;
      }
      if (d <= 100.0 * tol) {
        k.flagged = true;
        s.flagged = true;
      }
    }
    if (!dup) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const BetheSolution& a, const BetheSolution& b) {
    return canonical_less(a.roots, b.roots);
  });
  return kept;
}

}  // namespace

std::vector<cplx> polish_roots(const SpectralContext& ctx, std::vector<cplx> x) {
  try {
    double r = max_abs(residual_vector(ctx, x));
    for (int it = 0; it < 8 && r > 0.0; ++it) {
      const VariableSet set(x, ctx.eps_dist());
      const auto e = bethe_residuals(ctx, set);
      CVector rhs(static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < x.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = -e[i];
      const CVector step = solve(bethe_jacobian(ctx, set), rhs);
      std::vector<cplx> trial(x);
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] += step(static_cast<Eigen::Index>(i));
      const double rt = max_abs(residual_vector(ctx, trial));
      if (!(rt < r)) break;
      x = std::move(trial);
      r = rt;
    }
  } catch (const Error&) {
  }
  return x;
}

double BetheSolution::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

double onshell_threshold(const SpectralContext& ctx, const VariableSet& roots, double tol) {
  double scale = 1.0;
  for (cplx u : roots) {
    const auto w = vacuum_weights(ctx, u);
    scale = std::max(scale, std::abs(w.lambda1 * w.lambda2));
  }
  return tol * scale;
}

BetheSolution make_solution(const SpectralContext& ctx, std::vector<cplx> roots,
                            const SolverOptions& opt, std::string method) {
  BetheSolution s;
  s.method = std::move(method);
  try {
    s.roots = VariableSet(std::move(roots), ctx.eps_dist()).canonical();
    for (cplx e : bethe_residuals(ctx, s.roots)) s.residuals.push_back(std::abs(e));
  } catch (const CoincidenceError&) {
    // Repeated roots: outside the non-singular class, kept only as a flag.
    s.roots = VariableSet(std::move(roots), 0.0).canonical();
    s.residuals.assign(s.roots.size(), kInf);
    s.flagged = true;
  }
  s.tau = onshell_threshold(ctx, s.roots, opt.tol);
  s.singular = has_singular_pair(s.roots, ctx.c());
  s.onshell = !s.singular && s.max_residual() <= s.tau;
  return s;
}

bool has_singular_pair(const VariableSet& roots, cplx c) {
  const double tol = 1e-6 * std::max(1.0, std::abs(c));
  for (cplx a : roots) {
    for (cplx b : roots) {
      if (std::abs(a - b - c) <= tol) return true;
    }
  }
  return false;
}

double root_distance(const VariableSet& a, const VariableSet& b) {
  if (a.size() != b.size()) return kInf;
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  if (n <= 6) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = kInf;
    do {
      double d = 0.0;
      for (std::size_t i = 0; i < n && d < best; ++i) d = std::max(d, std::abs(a[i] - b[perm[i]]));
      best = std::min(best, d);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Greedy nearest assignment for larger sets.
  std::vector<bool> used(n, false);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t arg = n;
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && std::abs(a[i] - b[j]) < best) {
        best = std::abs(a[i] - b[j]);
        arg = j;
      }
    }
    used[arg] = true;
    d = std::max(d, best);
  }
  return d;
}

StartDisk start_disk(const SpectralContext& ctx) {
  const auto& th = ctx.chain.inhomogeneities;
  cplx center = 0.0;
  double spread = 0.0;
  for (cplx t : th) center += t;
  center /= static_cast<double>(th.size());
  for (cplx t : th) spread = std::max(spread, std::abs(t));
  const double c = std::abs(ctx.c());
  return {center, std::max(2.0 * c, 2.0 * spread + c)};
}

std::optional<std::vector<cplx>> newton_from(const SpectralContext& ctx, std::vector<cplx> x,
                                             const SolverOptions& opt) {
  const double blowup = 1e6 * start_disk(ctx).radius;
  try {
    auto e = residual_vector(ctx, x);
    double r = max_abs(e);
    for (std::size_t it = 0; it < opt.max_iter; ++it) {
      const VariableSet set(x, ctx.eps_dist());
      const double tau = onshell_threshold(ctx, set, opt.tol);
      if (r <= 1e-3 * tau) return polish_roots(ctx, std::move(x));

      const CMatrix jac = bethe_jacobian(ctx, set);
      CVector rhs(static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < x.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = -e[i];
      const CVector step = solve(jac, rhs);

      double damping = 1.0;
      bool accepted = false;
      for (int halving = 0; halving <= 20; ++halving, damping *= 0.5) {
        std::vector<cplx> trial(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
          trial[i] += damping * step(static_cast<Eigen::Index>(i));
        }
        try {
          auto et = residual_vector(ctx, trial);
          const double rt = max_abs(et);
          if (rt < r) {
            x = std::move(trial);
            e = std::move(et);
            r = rt;
            accepted = true;
            break;
          }
        } catch (const CoincidenceError&) {
        }
      }
      if (!accepted) {
        // Stalled: accept only if already at the on-shell threshold.
        return r <= tau ? std::optional(polish_roots(ctx, std::move(x))) : std::nullopt;
      }
      if (max_abs(x) > blowup) return std::nullopt;
    }
    const double tau = onshell_threshold(ctx, VariableSet(x, ctx.eps_dist()), opt.tol);
    return r <= tau ? std::optional(x) : std::nullopt;
  } catch (const Error&) {
    // Coincident iterate or singular Jacobian: abandon this start.
    return std::nullopt;
  }
}

std::vector<BetheSolution> solve_newton(const SpectralContext& ctx, const SolverOptions& opt) {
  const std::size_t n = ctx.sites();
  const auto disk = start_disk(ctx);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<cplx>> starts(opt.starts);
  for (auto& s : starts) {
    s.resize(n);
    for (auto& z : s) {
      const double rad = disk.radius * std::sqrt(unit(rng));
      const double phi = 2.0 * M_PI * unit(rng);
      z = disk.center + std::polar(rad, phi);
    }
  }

  std::vector<std::optional<std::vector<cplx>>> results(starts.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(opt.threads, starts.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < starts.size(); ++k) results[k] = newton_from(ctx, starts[k], opt);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < starts.size(); k += workers) {
          results[k] = newton_from(ctx, starts[k], opt);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }

  std::vector<BetheSolution> found;
  for (auto& r : results) {
    if (!r) continue;
    auto s = make_solution(ctx, std::move(*r), opt, "newton");
    if (s.onshell) found.push_back(std::move(s));
  }
  return deduplicate(std::move(found), opt.dedup_tol);
}

TqFit fit_q(const SpectralContext& ctx, const EigenvalueSamples& samples) {
  const std::size_t n = ctx.sites();
  const cplx c = ctx.c();
  std::vector<MatrixSample> pts;
  for (std::size_t k = 0; k < samples.nodes.size(); ++k) {
    pts.push_back({samples.nodes[k], CMatrix::Constant(1, 1, samples.values[k])});
  }
  const auto interp = poly_from_samples(pts, n);
  Coeffs lambda;
  for (const auto& m : interp.coefficients()) lambda.push_back(m(0, 0));

  const auto [l1, l2] = vacuum_weight_polynomials(ctx);
  const std::size_t rows = 2 * n + 1;
  auto column = [&](std::size_t k) {
    Coeffs mono(k + 1, 0.0);
    mono[k] = 1.0;
    Coeffs col = poly_mul(lambda, mono);
    col = poly_add(col, poly_scale(poly_mul(l1, poly_shift(mono, -c)), -ctx.d1()));
    col = poly_add(col, poly_scale(poly_mul(l2, poly_shift(mono, c)), -ctx.d2()));
    col.resize(rows, 0.0);
    return col;
  };
  CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto col = column(k);
    for (std::size_t r = 0; r < rows; ++r) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = col[r];
    }
  }
  const auto top = column(n);
  Coeffs inh = poly_scale(poly_mul(l1, l2),
                          2.0 * ctx.factor.rho * std::pow(c, static_cast<int>(n)));
  inh.resize(rows, 0.0);
  CVector b(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) b(static_cast<Eigen::Index>(r)) = inh[r] - top[r];

  TqFit fit;
  CVector q = n > 0 ? CVector(a.colPivHouseholderQr().solve(b)) : CVector(0);
  fit.q.assign(q.data(), q.data() + q.size());
  fit.q.push_back(1.0);
  const CVector res = (n > 0 ? CVector(a * q) : CVector::Zero(b.size())) - b;
  fit.residual = res.norm() / std::max(b.norm(), 1e-300);
  return fit;
}

cplx tq_probe_point(const SpectralContext& ctx) {
  return start_disk(ctx).center + ctx.c() * cplx(0.4137, 0.2171);
}

std::vector<BetheSolution> solve_tq_fit(const SpectralContext& ctx, const MatrixPolynomial& transfer,
                                        const SolverOptions& opt) {
  const cplx probe = tq_probe_point(ctx);
  const auto pairs = eigenpairs(transfer(probe));
  const auto nodes = default_nodes(ctx.sites(), ctx.c(), ctx.chain.inhomogeneities);

  // Flag eigenvalues that are degenerate at the probe: their eigenvectors are
  // not guaranteed to be common to the whole family.
  double spread = 0.0;
  for (const auto& p : pairs) spread = std::max(spread, std::abs(p.value));

  std::vector<BetheSolution> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const CVector& v = pairs[k].vector;
    EigenvalueSamples samples{nodes, {}};
    for (cplx x : nodes) {
      samples.values.push_back(v.dot(transfer(x) * v) / v.squaredNorm());
    }
    const auto fit = fit_q(ctx, samples);
    std::vector<cplx> roots = polish_roots(ctx, poly_roots(fit.q));
    auto sol = make_solution(ctx, std::move(roots), opt, "tq_fit");
    sol.matched_eigenvalue = samples.values;
    sol.nodes = nodes;
    sol.fit_residual = fit.residual;
    bool degenerate = false;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (j != k && std::abs(pairs[j].value - pairs[k].value) <= 1e-8 * std::max(1.0, spread)) {
        degenerate = true;
      }
    }
    if (fit.residual > opt.fit_tol || degenerate || !sol.onshell) sol.flagged = true;
    out.push_back(std::move(sol));
  }
  std::sort(out.begin(), out.end(), [](const BetheSolution& a, const BetheSolution& b) {
    return canonical_less(a.roots, b.roots);
  });
  return out;
}

MatchReport classify_solutions(const SpectralContext& ctx, const std::vector<BetheSolution>& a,
                               const std::vector<BetheSolution>& b, double tol) {
  MatchReport rep;
  const cplx probe = tq_probe_point(ctx);
  const std::vector<cplx> probes{probe, probe + 0.37 * ctx.c(), probe - cplx(0.0, 0.61) * ctx.c()};
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t best_j = b.size();
    double best = kInf;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = root_distance(a[i].roots, b[j].roots);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best_j < b.size() && best <= tol) {
      used[best_j] = true;
      SolutionPair p{i, best_j, best, 0.0};
      for (cplx u : probes) {
        try {
          p.eigenvalue_gap = std::max(p.eigenvalue_gap,
                                      std::abs(eigenvalue_lambda(ctx, u, a[i].roots) -
                                               eigenvalue_lambda(ctx, u, b[best_j].roots)));
        } catch (const CoincidenceError&) {
          p.eigenvalue_gap = kInf;
        }
      }
      rep.max_eigenvalue_gap = std::max(rep.max_eigenvalue_gap, p.eigenvalue_gap);
      rep.matched.push_back(p);
    } else {
      rep.unmatched_a.push_back(i);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used[j]) rep.unmatched_b.push_back(j);
  }
  return rep;
}

std::vector<BetheSolution> merge_solutions(const std::vector<BetheSolution>& a,
                                           const std::vector<BetheSolution>& b, double tol) {
  std::vector<BetheSolution> all;
  for (const auto* list : {&a, &b}) {
    for (const auto& s : *list) {
      if (s.onshell) all.push_back(s);
    }
  }
  return deduplicate(std::move(all), tol);
}

CompletenessReport check_completeness(const SpectralContext& ctx, const MatrixPolynomial& transfer,
                                      const std::vector<BetheSolution>& solutions,
                                      const std::vector<cplx>& probes, double tol) {
  CompletenessReport rep;
  rep.expected = std::size_t{1} << ctx.sites();
  rep.distinct = solutions.size();
  for (cplx u : probes) {
    const auto spectrum = eigenvalues(transfer(u));
    std::vector<cplx> lams;
    for (const auto& s : solutions) lams.push_back(eigenvalue_lambda(ctx, u, s.roots));
    for (cplx e : spectrum) {
      double best = kInf;
      for (cplx l : lams) best = std::min(best, std::abs(e - l) / std::max(1.0, std::abs(e)));
      rep.max_spectrum_gap = std::max(rep.max_spectrum_gap, best);
    }
    for (cplx l : lams) {
      double best = kInf;
      for (cplx e : spectrum) best = std::min(best, std::abs(e - l) / std::max(1.0, std::abs(e)));
      rep.max_solution_gap = std::max(rep.max_solution_gap, best);
    }
  }
  rep.complete = rep.distinct == rep.expected && rep.max_spectrum_gap <= tol &&
                 rep.max_solution_gap <= tol;
  return rep;
}

}  // namespace maba
