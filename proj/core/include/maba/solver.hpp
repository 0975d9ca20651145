#pragma once

// Solutions of the inhomogeneous Bethe equations at M = N by two independent
// routes: damped Newton from random starts, and a linear fit of Q(u) to
// exact-diagonalization eigenvalues through the T-Q identity.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maba/bethe.hpp"
#include "maba/linalg.hpp"

namespace maba {

struct SolverOptions {
  std::size_t max_iter = 100;
  // On-shell threshold factor: tau = tol * max(1, max_i |l1(u_i) l2(u_i)|).
  double tol = 1e-8;
  std::size_t starts = 200;
  std::uint64_t seed = 1;
  double dedup_tol = 1e-6;
  // Flag threshold for the relative least-squares residual of the T-Q fit.
  double fit_tol = 1e-8;
  // Worker threads for the Newton starts; results do not depend on it.
  std::size_t threads = 1;
};

struct BetheSolution {
  VariableSet roots;            // canonical order
  std::vector<double> residuals;  // |E(u_i, u_i-bar)|
  double tau = 0.0;             // on-shell threshold used
  bool onshell = false;
  std::string method;           // "newton" or "tq_fit"
  // T-Q fit only: the eigenvalue the roots were fitted to, sampled at nodes.
  std::optional<std::vector<cplx>> matched_eigenvalue;
  std::vector<cplx> nodes;
  double fit_residual = 0.0;
  bool flagged = false;
  // Contains a pair u_b = u_a - c (e.g. {theta, theta - c}): every residual
  // vanishes trivially but there is no eigenvector. Never on-shell.
  bool singular = false;

  double max_residual() const;
};

// tau = tol * max(1, max_i |l1(u_i) l2(u_i)|)
double onshell_threshold(const SpectralContext& ctx, const VariableSet& roots, double tol);

// True when some pair of roots differs by c to within 1e-6 max(1, |c|).
bool has_singular_pair(const VariableSet& roots, cplx c);

// Builds a BetheSolution (canonical order, residuals, on-shell flag).
BetheSolution make_solution(const SpectralContext& ctx, std::vector<cplx> roots,
                            const SolverOptions& opt, std::string method);

// Permutation-invariant distance max_i |a_i - b_sigma(i)| minimized over sigma.
double root_distance(const VariableSet& a, const VariableSet& b);

// Center and radius of the start disk.
struct StartDisk {
  cplx center;
  double radius;
};
StartDisk start_disk(const SpectralContext& ctx);

std::vector<BetheSolution> solve_newton(const SpectralContext& ctx, const SolverOptions& opt = {});

// Full Newton steps while the residual keeps decreasing (at most 8); returns
// the input unchanged if it cannot be improved.
std::vector<cplx> polish_roots(const SpectralContext& ctx, std::vector<cplx> roots);

// One damped Newton run from `start`; empty if it fails to converge.
std::optional<std::vector<cplx>> newton_from(const SpectralContext& ctx, std::vector<cplx> start,
                                             const SolverOptions& opt);

// Per-eigenvector ingredients of the T-Q fit, exposed for tests.
struct EigenvalueSamples {
  std::vector<cplx> nodes;
  std::vector<cplx> values;
};

struct TqFit {
  Coeffs q;               // monic, degree N
  double residual = 0.0;  // |A q - b| / |b|
};

// Least-squares monic Q from samples of Lambda(u) at N + 1 nodes.
TqFit fit_q(const SpectralContext& ctx, const EigenvalueSamples& samples);

std::vector<BetheSolution> solve_tq_fit(const SpectralContext& ctx, const MatrixPolynomial& transfer,
                                        const SolverOptions& opt = {});

// Probe point used for the eigenvector basis of the T-Q fit.
cplx tq_probe_point(const SpectralContext& ctx);

struct SolutionPair {
  std::size_t a = 0, b = 0;
  double distance = 0.0;
  double eigenvalue_gap = 0.0;  // max over probes of |Lambda_a - Lambda_b|
};

struct MatchReport {
  std::vector<SolutionPair> matched;
  std::vector<std::size_t> unmatched_a;
  std::vector<std::size_t> unmatched_b;
  double max_eigenvalue_gap = 0.0;
};

MatchReport classify_solutions(const SpectralContext& ctx, const std::vector<BetheSolution>& a,
                               const std::vector<BetheSolution>& b, double tol = 1e-6);

// Union of on-shell solutions from both routes, deduplicated.
std::vector<BetheSolution> merge_solutions(const std::vector<BetheSolution>& a,
                                           const std::vector<BetheSolution>& b,
                                           double tol = 1e-6);

struct CompletenessReport {
  std::size_t distinct = 0;
  std::size_t expected = 0;
  // For every exact-diagonalization eigenvalue at each probe, the relative
  // distance to the closest Lambda(probe, roots) over the solutions.
  double max_spectrum_gap = 0.0;
  // The other direction: every solution's Lambda must sit in the spectrum.
  double max_solution_gap = 0.0;
  bool complete = false;
};

CompletenessReport check_completeness(const SpectralContext& ctx, const MatrixPolynomial& transfer,
                                      const std::vector<BetheSolution>& solutions,
                                      const std::vector<cplx>& probes, double tol = 1e-8);

}  // namespace maba
