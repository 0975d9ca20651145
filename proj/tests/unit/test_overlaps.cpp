#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "maba/errors.hpp"
#include "maba/overlaps.hpp"
#include "maba/solver.hpp"

using namespace maba;

namespace {

std::vector<BetheSolution> all_solutions(const SpectralContext& ctx, const ChainOperators& ops) {
  return merge_solutions(solve_newton(ctx), solve_tq_fit(ctx, ops.transfer));
}

// Off-shell set kept away from the on-shell roots.
VariableSet offshell_partner(std::mt19937_64& rng, const SpectralContext& ctx, const VariableSet& u) {
  for (;;) {
    auto v = fixtures::random_set(rng, u.size());
    bool ok = true;
    for (cplx a : u)
      for (cplx b : v) ok = ok && std::abs(a - b) > 1e-2;
    for (std::size_t i = 0; ok && i < v.size(); ++i)
      ok = std::abs(bethe_residual(ctx, i, v)) > 1e-3;
    if (ok) return v;
  }
}

}  // namespace

TEST_SUITE("overlaps") {

TEST_CASE("empty scalar product is one") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  CHECK(scalar_direct(build_dual_vector(ops.nu, {}), build_bethe_vector(ops.nu, {})) == cplx(1.0));
  std::mt19937_64 rng(1);
  const auto big = ChainOperators::build(fixtures::random_context(rng, 2));
  CHECK_THROWS_AS(scalar_direct(build_dual_vector(ops.nu, {}), build_bethe_vector(big.nu, {})),
                  DimensionError);
}

TEST_CASE("single-site scalar product in closed form") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  const double mu = fixtures::mu_a, rho = fixtures::rho_a;
  for (auto [u, v] : {std::pair<cplx, cplx>{0.2, 0.9}, {cplx(-0.3, 0.4), cplx(1.1, -0.2)}}) {
    const cplx expected = mu * mu * (1.0 + rho * rho * (2.0 * u + 1.0) * (2.0 * v + 1.0));
    const cplx s = scalar_direct(build_dual_vector(ops.nu, VariableSet{u}),
                                 build_bethe_vector(ops.nu, VariableSet{v}));
    CHECK(std::abs(s - expected) < 1e-13);
  }
}

TEST_CASE("single-site on-shell vectors are orthogonal") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  const auto r = fixtures::roots_a();
  const cplx s = scalar_direct(build_dual_vector(ops.nu, VariableSet{r[1]}),
                               build_bethe_vector(ops.nu, VariableSet{r[0]}));
  CHECK(std::abs(s) < 1e-10);
  CHECK(normalized_overlap(ops, VariableSet{r[0]}, VariableSet{r[1]}) < 1e-10);
}

TEST_CASE("single-site Slavnov anchor") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  const double root = fixtures::roots_a()[1];
  const cplx s = slavnov_formula(ctx, VariableSet{0.0}, VariableSet{root}, Orientation::v_onshell);
  CHECK(std::abs(s - fixtures::mu_a * fixtures::mu_a * root) < 1e-12);
  CHECK(std::abs(s - 2.218034) < 1e-6);
  const auto rep = slavnov_report(ops, ctx, VariableSet{0.0}, VariableSet{root}, Orientation::v_onshell);
  CHECK(rep.relative_error < 1e-10);
}

TEST_CASE("single-site Gaudin matrix and norm") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  const double u1 = fixtures::roots_a()[1];
  const CMatrix g = gaudin_matrix(ctx, VariableSet{u1});
  CHECK(std::abs(g(0, 0) - fixtures::sqrt5) < 1e-12);
  CHECK(std::abs(g(0, 0) - (2.0 * fixtures::rho_a * (2.0 * u1 + 1.0) + 1.0 - 2.0)) < 1e-12);
  const cplx n = gaudin_norm(ctx, VariableSet{u1});
  const double mu = fixtures::mu_a, rho = fixtures::rho_a;
  CHECK(std::abs(n - mu * mu * (1.0 + rho * rho * (2.0 * u1 + 1.0) * (2.0 * u1 + 1.0))) < 1e-12);
  CHECK(std::abs(n - 4.959675) < 1e-6);
  for (double r : fixtures::roots_a()) CHECK(norm_report(ops, ctx, VariableSet{r}).relative_error < 1e-9);
}

TEST_CASE("single-site parametrizations") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  const auto ref = n1_reference(ops, ctx, 0.2, 0.9);
  CHECK(ref.parametrization_error < 1e-12);
  CHECK(ref.alternative_error < 1e-12);
  CHECK_FALSE(ref.linearized.has_value());

  // The alternative with lambda1(v) + lambda1(v) in place of the vacuum sum
  // misses the direct value.
  const auto wu = vacuum_weights(ctx, 0.2), wv = vacuum_weights(ctx, 0.9);
  const cplx sd = kernel_g(0.2, 0.9, 1.0) * (wv.lambda1 * wu.lambda2 - wu.lambda1 * wv.lambda2);
  const double mu = fixtures::mu_a, rho = fixtures::rho_a;
  const cplx misread = mu * mu * (sd + rho * rho * (wu.lambda1 + wu.lambda2) * (2.0 * wv.lambda1));
  CHECK(relative_error(misread, ref.direct) > 1e-2);

  const auto r = fixtures::roots_a();
  const auto on = n1_reference(ops, ctx, cplx(0.3, -0.1), r[1]);
  REQUIRE(on.linearized.has_value());
  CHECK(*on.linearized_error < 1e-10);
  CHECK(on.parametrization_error < 1e-12);
  const auto both = n1_reference(ops, ctx, r[0], r[1]);
  CHECK(std::abs(both.direct) < 1e-10);

  std::mt19937_64 rng(4);
  const auto ctx2 = fixtures::random_context(rng, 2);
  CHECK_THROWS_AS(n1_reference(ChainOperators::build(ctx2), ctx2, 0.1, 0.2), ArityError);
}

TEST_CASE("Slavnov formula against direct contraction, both orientations") {
  std::mt19937_64 rng(61);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = fixtures::random_context(rng, n);
    const auto ops = ChainOperators::build(ctx);
    const auto sols = all_solutions(ctx, ops);
    CHECK(sols.size() == (std::size_t{1} << n));
    for (const auto& s : sols) {
      for (int k = 0; k < 3; ++k) {
        const auto v = offshell_partner(rng, ctx, s.roots);
        const auto a = slavnov_report(ops, ctx, s.roots, v, Orientation::u_onshell);
        const auto b = slavnov_report(ops, ctx, v, s.roots, Orientation::v_onshell);
        INFO(n, " ", a.direct, " ", a.formula);
        CHECK(a.relative_error < 1e-8);
        CHECK(b.relative_error < 1e-8);
      }
    }
  }
}

TEST_CASE("Gaudin-Korepin norm against direct contraction") {
  std::mt19937_64 rng(62);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = fixtures::random_context(rng, n);
    const auto ops = ChainOperators::build(ctx);
    for (const auto& s : all_solutions(ctx, ops)) {
      CHECK(norm_report(ops, ctx, s.roots).relative_error < 1e-8);
    }
  }
}

TEST_CASE("Gaudin matrix is the coinciding limit") {
  std::mt19937_64 rng(63);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = fixtures::random_context(rng, n);
    for (const auto& s : solve_newton(ctx)) {
      CHECK(gaudin_limit_check(ctx, s.roots).relative_error < 1e-5);
      CHECK(norm_limit_check(ctx, s.roots).relative_error < 1e-5);
    }
  }
}

TEST_CASE("Slavnov Jacobian matches finite differences") {
  std::mt19937_64 rng(64);
  const double h = 1e-6;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = fixtures::random_context(rng, n);
    const auto u = fixtures::random_set(rng, n), v = offshell_partner(rng, ctx, u);
    const CMatrix j = slavnov_jacobian(ctx, u, v, Orientation::u_onshell);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const cplx fd = (eigenvalue_lambda(ctx, v[k], u.with_value(i, u[i] + h)) -
                         eigenvalue_lambda(ctx, v[k], u.with_value(i, u[i] - h))) /
                        (2.0 * h);
        const cplx an = j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        CHECK(std::abs(an - fd) <= 1e-6 * std::max(std::abs(an), 1.0));
      }
    }
  }
}

TEST_CASE("distinct on-shell vectors are orthogonal") {
  std::mt19937_64 rng(65);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = fixtures::random_context(rng, n);
    const auto ops = ChainOperators::build(ctx);
    const auto sols = all_solutions(ctx, ops);
    for (std::size_t a = 0; a < sols.size(); ++a)
      for (std::size_t b = 0; b < sols.size(); ++b)
        if (a != b) CHECK(normalized_overlap(ops, sols[a].roots, sols[b].roots) < 1e-8);
  }
}

TEST_CASE("diagonal twist reproduces the classical Slavnov formula") {
  std::mt19937_64 rng(66);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = fixtures::random_context(rng, n, true);
    const auto ops = ChainOperators::build(ctx);
    for (const auto& s : solve_newton(ctx)) {
      const auto u = offshell_partner(rng, ctx, s.roots);
      const cplx classical = classical_slavnov(ctx, u, s.roots);
      const cplx modified = slavnov_formula(ctx, u, s.roots, Orientation::v_onshell);
      const cplx direct = scalar_direct(build_dual_vector(ops.nu, u),
                                        build_bethe_vector(ops.nu, s.roots));
      CHECK(relative_error(classical, modified) < 1e-10);
      CHECK(relative_error(classical, direct) < 1e-8);
    }
  }
}

TEST_CASE("spectral projectors do not depend on the rho branch") {
  std::mt19937_64 rng(67);
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto chain = fixtures::random_chain(rng, n);
    const auto tw = fixtures::random_twist(rng);
    const auto a = SpectralContext::make(chain, tw, RhoBranch::minus);
    const auto b = SpectralContext::make(chain, tw, RhoBranch::plus);
    const auto oa = ChainOperators::build(a), ob = ChainOperators::build(b);
    const auto sa = all_solutions(a, oa), sb = all_solutions(b, ob);
    REQUIRE(sa.size() == sb.size());
    const cplx probe(0.37, 0.21);
    for (const auto& x : sa) {
      const cplx ex = eigenvalue_lambda(a, probe, x.roots);
      const BetheSolution* match = nullptr;
      for (const auto& y : sb)
        if (relative_error(eigenvalue_lambda(b, probe, y.roots), ex) < 1e-8) match = &y;
      REQUIRE(match != nullptr);
      const CMatrix pa = spectral_projector(oa, a, x.roots);
      const CMatrix pb = spectral_projector(ob, b, match->roots);
      CHECK(frobenius(pa - pb) < 1e-8 * std::max(1.0, frobenius(pa)));
      CHECK(frobenius(pa * pa - pa) < 1e-8 * std::max(1.0, frobenius(pa)));
    }
  }
}

TEST_CASE("simplest eigenvalue from the twist eigenvalue") {
  const auto ctx = fixtures::config_a();
  const auto ops = ChainOperators::build(ctx);
  const auto sols = solve_newton(ctx);
  const auto rep = simple_aba_check(ctx, ops.transfer, sols, default_probes(ctx));
  CHECK(std::abs(rep.alpha - (3.0 + fixtures::sqrt5) / 2.0) < 1e-12);
  CHECK(rep.spectrum_gap < 1e-9);
  REQUIRE(rep.matched_solution.has_value());
  CHECK(std::abs(sols[*rep.matched_solution].roots[0] - fixtures::roots_a()[1]) < 1e-9);

  std::mt19937_64 rng(68);
  const auto ctx2 = fixtures::random_context(rng, 2);
  const auto ops2 = ChainOperators::build(ctx2);
  const auto rep2 = simple_aba_check(ctx2, ops2.transfer, all_solutions(ctx2, ops2), default_probes(ctx2));
  CHECK(rep2.spectrum_gap < 1e-9);
  CHECK(rep2.matched_solution.has_value());

  const auto diag = SpectralContext::make(fixtures::single_site(), {2.0, 1.0, 0.0, 0.0});
  CHECK(simple_aba_check(diag, ChainOperators::build(diag).transfer, {}, default_probes(diag)).alpha ==
        cplx(2.0));
}

TEST_CASE("preconditions") {
  const auto ctx = fixtures::config_a();
  CHECK_THROWS_AS(slavnov_formula(ctx, VariableSet{0.3}, VariableSet{0.5}, Orientation::u_onshell),
                  PreconditionError);
  const double r = fixtures::roots_a()[1];
  CHECK_THROWS_AS(slavnov_formula(ctx, VariableSet{r}, VariableSet{r}, Orientation::u_onshell),
                  CoincidenceError);
  CHECK_THROWS_AS(slavnov_formula(ctx, VariableSet{r}, VariableSet{0.1, 0.2}, Orientation::u_onshell),
                  ArityError);
  CHECK_THROWS_AS(gaudin_norm(ctx, VariableSet{0.3}), PreconditionError);
  CHECK(relative_error(0.0, 0.0) == 0.0);
}

}  // TEST_SUITE
