// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "udsg/report.hpp"
#include "udsg/scenario.hpp"

namespace udsg {

struct CheckInfo {
  std::string name;
  std::string tag;
  std::string comparison;
  double tolerance;
};

// Every check in execution order with its default tolerance.
const std::vector<CheckInfo>& check_catalog();

// Unknown names in the selection or in tol.<name> overrides raise ConfigError.
void validate_checks(const Scenario& sc, const std::vector<std::string>& selected);

// Runs the enabled checks (all when `selected` is empty) and collects plot tables.
// Progress lines go to `log` when given.
RunResults run_suite(const Scenario& sc, const std::vector<std::string>& selected = {}, std::ostream* log = nullptr);

}  // namespace udsg
