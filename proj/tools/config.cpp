#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "maba/errors.hpp"

namespace maba::cli {

using nlohmann::json;

namespace {

cplx complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(field + ": expected [re, im]");
}

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(section + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError((section.empty() ? key : section + "." + key) + ": unknown key");
    }
  }
}

template <typename T>
T number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      throw ConfigError(field + ": expected a non-negative integer");
    }
  }
  return j.get<T>();
}

void apply_override(json& doc, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + item + "': expected key=value");
  }
  const std::string key = item.substr(0, eq);
  const std::string raw = item.substr(eq + 1);
  std::string pointer;
  std::stringstream parts(key);
  for (std::string part; std::getline(parts, part, '.');) {
    if (part.empty()) throw ConfigError("override '" + item + "': empty key segment");
    pointer += "/" + part;
  }
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  doc[json::json_pointer(pointer)] = value;
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

RunConfig config_from_json(json doc, const std::vector<std::string>& overrides) {
  if (doc.is_null()) doc = json::object();
  for (const auto& o : overrides) apply_override(doc, o);
  reject_unknown(doc, "", {"chain", "twist", "solver", "tolerances"});

  RunConfig cfg;
  bool explicit_theta = false;
  if (doc.contains("chain")) {
    const json& ch = doc["chain"];
    reject_unknown(ch, "chain", {"sites", "c", "inhomogeneities"});
    if (ch.contains("sites")) cfg.chain.sites = number<std::size_t>(ch["sites"], "chain.sites");
    if (ch.contains("c")) cfg.chain.c = complex_from_json(ch["c"], "chain.c");
    if (ch.contains("inhomogeneities")) {
      const json& th = ch["inhomogeneities"];
      if (!th.is_array()) throw ConfigError("chain.inhomogeneities: expected a list");
      cfg.chain.inhomogeneities.clear();
      for (std::size_t k = 0; k < th.size(); ++k) {
        cfg.chain.inhomogeneities.push_back(
            complex_from_json(th[k], "chain.inhomogeneities[" + std::to_string(k) + "]"));
      }
      explicit_theta = true;
    }
  }
  if (!explicit_theta) cfg.chain.inhomogeneities.assign(cfg.chain.sites, 0.0);

  if (doc.contains("twist")) {
    const json& tw = doc["twist"];
    reject_unknown(tw, "twist", {"kappa_tilde", "kappa", "kappa_plus", "kappa_minus", "rho_branch"});
    if (tw.contains("kappa_tilde")) cfg.twist.kappa_tilde = complex_from_json(tw["kappa_tilde"], "twist.kappa_tilde");
    if (tw.contains("kappa")) cfg.twist.kappa = complex_from_json(tw["kappa"], "twist.kappa");
    if (tw.contains("kappa_plus")) cfg.twist.kappa_plus = complex_from_json(tw["kappa_plus"], "twist.kappa_plus");
    if (tw.contains("kappa_minus")) cfg.twist.kappa_minus = complex_from_json(tw["kappa_minus"], "twist.kappa_minus");
    if (tw.contains("rho_branch")) {
      const json& b = tw["rho_branch"];
      if (b == "minus") {
        cfg.branch = RhoBranch::minus;
      } else if (b == "plus") {
        cfg.branch = RhoBranch::plus;
      } else {
        throw ConfigError("twist.rho_branch: expected \"minus\" or \"plus\"");
      }
    }
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    reject_unknown(s, "solver", {"max_iter", "tol", "starts", "seed", "threads"});
    if (s.contains("max_iter")) cfg.solver.max_iter = number<std::size_t>(s["max_iter"], "solver.max_iter");
    if (s.contains("tol")) cfg.solver.tol = number<double>(s["tol"], "solver.tol");
    if (s.contains("starts")) cfg.solver.starts = number<std::size_t>(s["starts"], "solver.starts");
    if (s.contains("seed")) cfg.solver.seed = number<std::uint64_t>(s["seed"], "solver.seed");
    if (s.contains("threads")) cfg.solver.threads = number<std::size_t>(s["threads"], "solver.threads");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    reject_unknown(t, "tolerances", {"structural", "onshell", "overlap"});
    if (t.contains("structural")) cfg.tolerances.structural = number<double>(t["structural"], "tolerances.structural");
    if (t.contains("onshell")) cfg.tolerances.onshell = number<double>(t["onshell"], "tolerances.onshell");
    if (t.contains("overlap")) cfg.tolerances.overlap = number<double>(t["overlap"], "tolerances.overlap");
  }

  if (cfg.chain.sites < 1) throw ConfigError("chain.sites: must be at least 1");
  if (cfg.chain.c == cplx(0.0)) throw ConfigError("chain.c: must be nonzero");
  if (cfg.chain.inhomogeneities.size() != cfg.chain.sites) {
    throw ConfigError("chain.inhomogeneities: length " +
                      std::to_string(cfg.chain.inhomogeneities.size()) + " does not match sites " +
                      std::to_string(cfg.chain.sites));
  }
  for (double tol : {cfg.solver.tol, cfg.tolerances.structural, cfg.tolerances.onshell,
                     cfg.tolerances.overlap}) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tolerances must be positive");
  }
  try {
    cfg.chain.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  // The on-shell tolerance doubles as the solver's threshold factor.
  cfg.solver.tol = doc.contains("solver") && doc["solver"].contains("tol") ? cfg.solver.tol
                                                                          : cfg.tolerances.onshell;
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": parse error at byte " + std::to_string(e.byte) + ": " +
                      e.what());
  }
  return config_from_json(std::move(doc), overrides);
}

json RunConfig::echo() const {
  json th = json::array();
  for (cplx t : chain.inhomogeneities) th.push_back(complex_to_json(t));
  return {
      {"chain", {{"sites", chain.sites}, {"c", complex_to_json(chain.c)}, {"inhomogeneities", th}}},
      {"twist",
       {{"kappa_tilde", complex_to_json(twist.kappa_tilde)},
        {"kappa", complex_to_json(twist.kappa)},
        {"kappa_plus", complex_to_json(twist.kappa_plus)},
        {"kappa_minus", complex_to_json(twist.kappa_minus)},
        {"rho_branch", branch == RhoBranch::minus ? "minus" : "plus"}}},
      {"solver",
       {{"max_iter", solver.max_iter},
        {"tol", solver.tol},
        {"starts", solver.starts},
        {"seed", solver.seed},
        {"threads", solver.threads}}},
      {"tolerances",
       {{"structural", tolerances.structural},
        {"onshell", tolerances.onshell},
        {"overlap", tolerances.overlap}}},
  };
}

}  // namespace maba::cli
