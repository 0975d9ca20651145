#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace maba {

struct Check {
  std::string name;
  double residual = 0.0;
};

using ResidualReport = std::vector<Check>;

inline double max_residual(const ResidualReport& report) {
  double worst = 0.0;
  for (const auto& c : report) worst = std::max(worst, c.residual);
  return worst;
}

inline void append(ResidualReport& into, const ResidualReport& more) {
  into.insert(into.end(), more.begin(), more.end());
}

}  // namespace maba
