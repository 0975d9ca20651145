#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "maba/bethe.hpp"
#include "maba/chain.hpp"
#include "maba/errors.hpp"
#include "maba/overlaps.hpp"
#include "maba/solver.hpp"
#include "maba/states.hpp"

namespace maba::cli {

using nlohmann::json;

namespace {

json cnum(cplx z) { return json::array({round15(z.real()), round15(z.imag())}); }

json clist(const std::vector<cplx>& zs) {
  json out = json::array();
  for (cplx z : zs) out.push_back(cnum(z));
  return out;
}

class Report {
 public:
  void check(const std::string& name, double residual, double tolerance) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    ok_ = ok_ && pass;
    checks_.push_back({{"name", name},
                       {"residual", round15(residual)},
                       {"tolerance", tolerance},
                       {"status", pass ? "pass" : "fail"}});
  }
  void fail(const std::string& name, const std::string& message) {
    ok_ = false;
    checks_.push_back({{"name", name}, {"status", "fail"}, {"message", message}});
  }
  void checks(const ResidualReport& rep, const std::string& prefix, double tolerance) {
    for (const auto& c : rep) check(prefix + c.name, c.residual, tolerance);
  }
  bool ok() const { return ok_; }
  json take() { return std::move(checks_); }

 private:
  json checks_ = json::array();
  bool ok_ = true;
};

// Deterministic off-shell parameters around the inhomogeneities.
class Draws {
 public:
  Draws(const SpectralContext& ctx, std::uint64_t seed) : ctx_(ctx), rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  VariableSet set(std::size_t m) {
    const auto disk = start_disk(ctx_);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<cplx> v(m);
    for (auto& z : v) z = disk.center + 0.5 * disk.radius * cplx(unit(rng_), unit(rng_));
    return ctx_.variables(std::move(v));
  }

 private:
  const SpectralContext& ctx_;
  std::mt19937_64 rng_;
};

json solution_json(const BetheSolution& s) {
  json r = {{"method", s.method},
            {"roots", clist(s.roots.values())},
            {"onshell", s.onshell},
            {"flagged", s.flagged},
            {"singular", s.singular},
            {"tau", round15(s.tau)}};
  json res = json::array();
  for (double e : s.residuals) res.push_back(round15(e));
  r["residuals"] = res;
  if (s.method == "tq_fit") r["fit_residual"] = round15(s.fit_residual);
  return r;
}

std::vector<BetheSolution> all_solutions(const SpectralContext& ctx, const ChainOperators& ops,
                                         const RunConfig& cfg) {
  const auto newton = solve_newton(ctx, cfg.solver);
  const auto tq = solve_tq_fit(ctx, ops.transfer, cfg.solver);
  return merge_solutions(newton, tq, cfg.solver.dedup_tol);
}

void run_verify(const SpectralContext& ctx, const ChainOperators& ops, const RunConfig& cfg,
                Report& rep, json&) {
  const double tol = cfg.tolerances.structural;
  const auto probes = default_probes(ctx);
  const cplx u = probes[0];
  rep.checks(structure_checks(ctx.chain, ctx.twist, u, probes[1]), "structure.", tol);
  rep.checks(vacuum_action_residuals(ops.nu, ctx.factor, ctx.chain, u), "vacuum.", tol);
  Draws draws(ctx, cfg.solver.seed);
  for (std::size_t m = 0; m <= ctx.sites(); ++m) {
    rep.checks(offshell_action_residuals(ops, ctx, u, draws.set(m)),
               "action.M" + std::to_string(m) + ".", tol);
  }
  if (!ctx.factor.diagonal) {
    rep.check("raising_identity", raising_identity_residual(ops, ctx, u, draws.set(ctx.sites())),
              tol);
  }
  if (ctx.chain.is_homogeneous() && ctx.twist.gamma() != cplx(0.0)) {
    const CMatrix direct = build_hamiltonian(ctx.chain, ctx.twist, HamiltonianRoute::direct);
    const CMatrix via = build_hamiltonian(ctx.chain, ctx.twist, HamiltonianRoute::transfer);
    rep.check("hamiltonian_routes", frobenius(direct - via) / std::max(1.0, frobenius(direct)),
              tol);
  }
}

void run_spectrum(const SpectralContext& ctx, const ChainOperators& ops, const RunConfig& cfg,
                  Report& rep, json& body) {
  json table = json::array();
  double worst = 0.0;
  for (cplx p : default_probes(ctx, 3)) {
    const CMatrix t = ops.transfer(p);
    auto pairs = eigenpairs(t);
    std::vector<cplx> values;
    for (const auto& e : pairs) {
      worst = std::max(worst, (t * e.vector - e.value * e.vector).norm() / std::max(1.0, frobenius(t)));
      values.push_back(e.value);
    }
    std::sort(values.begin(), values.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    table.push_back({{"probe", cnum(p)}, {"eigenvalues", clist(values)}});
  }
  rep.check("eigenpairs", worst, cfg.tolerances.structural);
  body["spectrum"] = table;
}

void run_solve(const SpectralContext& ctx, const ChainOperators& ops, const RunConfig& cfg,
               Report& rep, json& body) {
  const auto newton = solve_newton(ctx, cfg.solver);
  const auto tq = solve_tq_fit(ctx, ops.transfer, cfg.solver);
  const auto match = classify_solutions(ctx, newton, tq, cfg.solver.dedup_tol);
  const auto merged = merge_solutions(newton, tq, cfg.solver.dedup_tol);
  const auto probes = default_probes(ctx, 3);
  const auto comp = check_completeness(ctx, ops.transfer, merged, probes, cfg.tolerances.onshell);

  rep.check("completeness.count",
            std::abs(static_cast<double>(comp.distinct) - static_cast<double>(comp.expected)), 0.0);
  rep.check("completeness.spectrum_gap", comp.max_spectrum_gap, cfg.tolerances.onshell);
  rep.check("completeness.solution_gap", comp.max_solution_gap, cfg.tolerances.onshell);

  json sols = json::array();
  for (const auto& s : merged) sols.push_back(solution_json(s));
  json raw_newton = json::array(), raw_tq = json::array();
  for (const auto& s : newton) raw_newton.push_back(solution_json(s));
  for (const auto& s : tq) raw_tq.push_back(solution_json(s));
  body["solutions"] = sols;
  body["routes"] = {{"newton", raw_newton},
                    {"tq_fit", raw_tq},
                    {"matched", match.matched.size()},
                    {"newton_only", match.unmatched_a.size()},
                    {"tq_fit_only", match.unmatched_b.size()},
                    {"max_eigenvalue_gap", round15(match.max_eigenvalue_gap)}};
}

void run_overlap(const SpectralContext& ctx, const ChainOperators& ops, const RunConfig& cfg,
                 Report& rep, json& body) {
  const auto sols = all_solutions(ctx, ops, cfg);
  Draws draws(ctx, cfg.solver.seed);
  json table = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const VariableSet& u = sols[k].roots;
    for (int draw = 0; draw < 2; ++draw) {
      const VariableSet v = draws.set(ctx.sites());
      for (auto o : {Orientation::u_onshell, Orientation::v_onshell}) {
        const auto r = o == Orientation::u_onshell
                           ? slavnov_report(ops, ctx, u, v, o, cfg.tolerances.onshell)
                           : slavnov_report(ops, ctx, v, u, o, cfg.tolerances.onshell);
        worst = std::max(worst, r.relative_error);
        table.push_back({{"solution", k},
                         {"orientation", to_string(o)},
                         {"offshell", clist(v.values())},
                         {"direct", cnum(r.direct)},
                         {"formula", cnum(r.formula)},
                         {"relative_error", round15(r.relative_error)}});
      }
    }
  }
  rep.check("slavnov", worst, cfg.tolerances.overlap);
  double ortho = 0.0;
  for (std::size_t a = 0; a < sols.size(); ++a) {
    for (std::size_t b = 0; b < sols.size(); ++b) {
      if (a != b) ortho = std::max(ortho, normalized_overlap(ops, sols[a].roots, sols[b].roots));
    }
  }
  if (sols.size() > 1) rep.check("orthogonality", ortho, cfg.tolerances.overlap);
  body["overlaps"] = table;
}

void run_norm(const SpectralContext& ctx, const ChainOperators& ops, const RunConfig& cfg,
              Report& rep, json& body) {
  const auto sols = all_solutions(ctx, ops, cfg);
  json table = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const auto r = norm_report(ops, ctx, sols[k].roots, cfg.tolerances.onshell);
    worst = std::max(worst, r.relative_error);
    table.push_back({{"solution", k},
                     {"roots", clist(sols[k].roots.values())},
                     {"direct", cnum(r.direct)},
                     {"formula", cnum(r.formula)},
                     {"relative_error", round15(r.relative_error)}});
  }
  rep.check("gaudin_norm", worst, cfg.tolerances.overlap);
  body["norms"] = table;
}

}  // namespace

double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return std::strtod(buf, nullptr);
}

Command parse_command(const std::string& name) {
  if (name == "verify") return Command::verify;
  if (name == "spectrum") return Command::spectrum;
  if (name == "solve") return Command::solve;
  if (name == "overlap") return Command::overlap;
  if (name == "norm") return Command::norm;
  throw ConfigError("unknown command '" + name + "'");
}

const char* to_string(Command cmd) {
  switch (cmd) {
    case Command::verify: return "verify";
    case Command::spectrum: return "spectrum";
    case Command::solve: return "solve";
    case Command::overlap: return "overlap";
    case Command::norm: return "norm";
  }
  return "?";
}

RunResult execute(Command cmd, const RunConfig& cfg) {
  Report rep;
  json body = json::object();
  try {
    const auto ctx = SpectralContext::make(cfg.chain, cfg.twist, cfg.branch);
    const auto ops = ChainOperators::build(ctx);
    body["factorization"] = {{"rho", cnum(ctx.factor.rho)},
                             {"mu", cnum(ctx.factor.mu)},
                             {"diagonal", ctx.factor.diagonal}};
    switch (cmd) {
      case Command::verify: run_verify(ctx, ops, cfg, rep, body); break;
      case Command::spectrum: run_spectrum(ctx, ops, cfg, rep, body); break;
      case Command::solve: run_solve(ctx, ops, cfg, rep, body); break;
      case Command::overlap: run_overlap(ctx, ops, cfg, rep, body); break;
      case Command::norm: run_norm(ctx, ops, cfg, rep, body); break;
    }
  } catch (const Error& e) {
    rep.fail(std::string(to_string(cmd)) + ".error", e.what());
  }
  RunResult out;
  out.ok = rep.ok();
  out.report = {{"command", to_string(cmd)}, {"config", cfg.echo()}, {"status", out.ok ? "pass" : "fail"}};
  out.report["checks"] = rep.take();
  for (auto& [key, value] : body.items()) out.report[key] = value;
  return out;
}

}  // namespace maba::cli
