#pragma once

// Run configuration for the batch driver, read from JSON.
//
// Complex numbers are [re, im] pairs (a bare number is taken as real).
// Overrides use dotted keys, "chain.sites=3", and are applied after the file;
// the value is parsed as JSON when possible and as a string otherwise.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maba/params.hpp"
#include "maba/solver.hpp"
#include "maba/twist.hpp"

namespace maba::cli {

struct Tolerances {
  double structural = 1e-10;
  double onshell = 1e-8;
  // Slavnov and norm formulas against direct contraction.
  double overlap = 1e-8;
};

struct RunConfig {
  ChainParams chain;
  TwistParams twist;
  RhoBranch branch = RhoBranch::minus;
  SolverOptions solver;
  Tolerances tolerances;

  // Fully defaulted configuration as JSON, same schema as the input.
  nlohmann::json echo() const;
};

// Throws ConfigError: malformed JSON (with byte offset), unknown keys, wrong
// types, or an invariant violation naming the field.
RunConfig parse_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});
RunConfig config_from_json(nlohmann::json doc, const std::vector<std::string>& overrides = {});

nlohmann::json complex_to_json(cplx z);

}  // namespace maba::cli
