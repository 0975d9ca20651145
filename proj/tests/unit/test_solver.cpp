#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "maba/chain.hpp"
#include "maba/solver.hpp"

using namespace maba;

namespace {

SpectralContext two_site_generic() {
  ChainParams chain;
  chain.sites = 2;
  chain.c = 1.0;
  chain.inhomogeneities = {0.1, -0.1};
  return SpectralContext::make(chain, {cplx(1.3, 0.4), cplx(-0.6, 0.9), cplx(0.7, -0.2), cplx(0.5, 0.8)});
}

std::size_t onshell_count(const std::vector<BetheSolution>& s) {
  std::size_t k = 0;
  for (const auto& x : s) k += x.onshell ? 1 : 0;
  return k;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("Newton finds both single-site solutions") {
  const auto ctx = fixtures::config_a();
  const auto sols = solve_newton(ctx);
  REQUIRE(sols.size() == 2);
  const auto r = fixtures::roots_a();
  CHECK(std::abs(sols[0].roots[0] - r[0]) < 1e-10);
  CHECK(std::abs(sols[1].roots[0] - r[1]) < 1e-10);
  for (const auto& s : sols) {
    CHECK(s.onshell);
    CHECK(s.max_residual() <= s.tau);
    CHECK(s.method == "newton");
  }
}

TEST_CASE("T-Q fit recovers the Newton solutions") {
  const auto ctx = fixtures::config_a();
  const auto transfer = build_transfer(ctx.chain, ctx.twist);
  const auto a = solve_newton(ctx);
  const auto b = solve_tq_fit(ctx, transfer);
  REQUIRE(b.size() == 2);
  const auto rep = classify_solutions(ctx, a, b, 1e-8);
  CHECK(rep.matched.size() == 2);
  CHECK(rep.unmatched_a.empty());
  CHECK(rep.unmatched_b.empty());
  CHECK(rep.max_eigenvalue_gap < 1e-9);
  for (const auto& s : b) {
    CHECK(s.fit_residual < 1e-12);
    CHECK(s.matched_eigenvalue.has_value());
    CHECK_FALSE(s.flagged);
  }
}

TEST_CASE("classification with an empty side") {
  const auto ctx = fixtures::config_a();
  const auto a = solve_newton(ctx);
  const auto rep = classify_solutions(ctx, a, {});
  CHECK(rep.matched.empty());
  CHECK(rep.unmatched_a.size() == a.size());
  CHECK(classify_solutions(ctx, {}, {}).matched.empty());
}

TEST_CASE("two sites: each route finds all four solutions") {
  const auto ctx = two_site_generic();
  const auto transfer = build_transfer(ctx.chain, ctx.twist);
  const auto newton = solve_newton(ctx);
  const auto tq = solve_tq_fit(ctx, transfer);
  CHECK(newton.size() == 4);
  CHECK(onshell_count(tq) == 4);
  for (const auto& s : tq) CHECK(s.max_residual() < 1e-8);
  const auto rep = classify_solutions(ctx, newton, tq);
  CHECK(rep.matched.size() == 4);
  const auto merged = merge_solutions(newton, tq);
  const auto comp = check_completeness(ctx, transfer, merged,
                                       {cplx(0.3, 0.1), cplx(-0.7, 0.5), cplx(1.1, -0.4)});
  CHECK(comp.complete);
}

TEST_CASE("three sites: the union of routes is complete") {
  std::mt19937_64 rng(99);
  const auto ctx = fixtures::random_context(rng, 3);
  const auto transfer = build_transfer(ctx.chain, ctx.twist);
  const auto merged = merge_solutions(solve_newton(ctx), solve_tq_fit(ctx, transfer));
  const auto comp = check_completeness(ctx, transfer, merged,
                                       {cplx(0.3, 0.1), cplx(-0.7, 0.5), cplx(1.1, -0.4)});
  CHECK(comp.distinct == 8);
  CHECK(comp.max_spectrum_gap < 1e-8);
  CHECK(comp.max_solution_gap < 1e-8);
}

TEST_CASE("Newton output does not depend on the seed") {
  for (std::size_t n : {1, 2}) {
    const auto ctx = n == 1 ? fixtures::config_a() : two_site_generic();
    SolverOptions a, b;
    a.seed = 1;
    b.seed = 987654321;
    a.starts = b.starts = 50 * (std::size_t{1} << n);
    const auto sa = solve_newton(ctx, a), sb = solve_newton(ctx, b);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t k = 0; k < sa.size(); ++k) CHECK(root_distance(sa[k].roots, sb[k].roots) < 1e-8);
  }
}

TEST_CASE("Newton output does not depend on the thread count") {
  const auto ctx = two_site_generic();
  SolverOptions a, b;
  b.threads = 4;
  const auto sa = solve_newton(ctx, a), sb = solve_newton(ctx, b);
  REQUIRE(sa.size() == sb.size());
  for (std::size_t k = 0; k < sa.size(); ++k) {
    CHECK(sa[k].roots.values() == sb[k].roots.values());
  }
}

TEST_CASE("diagonal twist, single site: the root solves kt l1 = k l2") {
  const auto ctx = SpectralContext::make(fixtures::single_site(), {2.0, 1.0, 0.0, 0.0});
  const auto sols = solve_newton(ctx);
  REQUIRE(sols.size() == 1);
  const auto w = vacuum_weights(ctx, sols[0].roots[0]);
  CHECK(std::abs(2.0 * w.lambda1 - 1.0 * w.lambda2) < 1e-10);
  CHECK(std::abs(sols[0].roots[0] + 2.0) < 1e-10);
}

TEST_CASE("a perturbed eigenvalue sample inflates the fit residual") {
  const auto ctx = two_site_generic();
  const auto transfer = build_transfer(ctx.chain, ctx.twist);
  const auto tq = solve_tq_fit(ctx, transfer);
  REQUIRE_FALSE(tq.empty());
  EigenvalueSamples s{tq[0].nodes, *tq[0].matched_eigenvalue};
  const double clean = fit_q(ctx, s).residual;
  s.values[1] += 1e-3;
  const double dirty = fit_q(ctx, s).residual;
  CHECK(dirty >= 10.0 * std::max(clean, 1e-16));
  CHECK(dirty > 1e-8);
}

TEST_CASE("singular pairs are never on-shell") {
  std::mt19937_64 rng(7);
  const auto ctx = fixtures::random_context(rng, 2);
  const cplx th = ctx.chain.inhomogeneities[0];
  const auto s = make_solution(ctx, {th, th - ctx.c()}, {}, "newton");
  CHECK(s.singular);
  CHECK_FALSE(s.onshell);
}

TEST_CASE("root distance is permutation invariant") {
  const VariableSet a{1.0, 2.0, cplx(0.0, 1.0)};
  const VariableSet b{cplx(0.0, 1.0), 1.0, 2.0 + 1e-9};
  CHECK(root_distance(a, b) < 2e-9);
  CHECK(root_distance(a, VariableSet{1.0}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("start disk follows the inhomogeneities") {
  std::mt19937_64 rng(2);
  const auto ctx = fixtures::random_context(rng, 3);
  const auto disk = start_disk(ctx);
  cplx mean = 0.0;
  double spread = 0.0;
  for (cplx t : ctx.chain.inhomogeneities) {
    mean += t / 3.0;
    spread = std::max(spread, std::abs(t));
  }
  CHECK(std::abs(disk.center - mean) < 1e-15);
  CHECK(disk.radius == doctest::Approx(std::max(2.0 * std::abs(ctx.c()), 2.0 * spread + std::abs(ctx.c()))));
}

}  // TEST_SUITE
