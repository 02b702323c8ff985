// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "udsg/numerics.hpp"

namespace udsg {

// Invalid scenario file or value; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Support {
  double alpha = 0.0;
  double beta = 0.0;
};

struct Scenario {
  std::string name = "scenario";

  double weight_s = 2.0;
  int weight_pmax = 400;

  double L = 0.5;
  int N = 2000;

  double abar = 1.5;
  double line_tol = 1e-11;
  std::string line_rule = "trapezoid";

  std::string generator_kind = "diagonal";  // diagonal | curve
  std::vector<cplx> eigs{0.0, -1.0, cplx(1.0, 2.0)};
  double curve_k = 1.0, curve_C = 0.0, curve_y_step = 1.0, curve_delta = 0.5;
  int curve_n = 40;

  double t_max = 2.0;
  int points = 201;

  int testfn_n = 4096;
  double testfn_s = 2.0;
  std::vector<Support> battery{{0.1, 0.6}, {0.3, 0.9}, {0.5, 1.5}, {0.2, 1.8}, {1.0, 1.9}};
  std::vector<std::pair<Support, Support>> pairs{{{0.1, 0.9}, {0.2, 0.7}},   {{0.05, 0.5}, {0.3, 0.85}},
                                                 {{0.1, 0.4}, {0.5, 0.9}},   {{0.2, 0.6}, {0.2, 0.6}},
                                                 {{0.02, 0.3}, {0.1, 0.8}},  {{0.4, 0.88}, {0.05, 0.25}}};
  std::vector<Support> fundamental{{0.2, 1.8}, {0.1, 0.9}, {0.5, 1.5}, {1.0, 1.9}};
  std::vector<Support> fundamental_origin{{-0.5, 0.5}, {-0.3, 0.7}, {-0.8, 0.4}, {-0.2, 0.2}};

  double resolvent_t_max = 24.0;
  int resolvent_n = 8192;
  double ramp_s0 = 1.0, ramp_s0_alt = 0.5;
  std::vector<cplx> lambdas{2.0, cplx(2.0, 5.0), cplx(3.0, -3.0)};

  int growth_samples = 1000;
  double growth_rmax = 1000.0;

  double fit_k = 1.0, fit_C = 0.0;
  int fit_n = 40;
  int fit_samples = 500;
  double fit_halfplane = 2.0;

  double restriction_t_max = 1.0;
  int refine_levels = 3;

  unsigned long long seed = 20240601ULL;
  std::string out_dir;

  std::map<std::string, double> tolerances;  // tol.<check> overrides

  // Resolved key/value pairs in file order of the schema, for the report.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

cplx parse_complex(const std::string& s);
std::string format_complex(cplx z);

// Flat "key = value" text, '#' comments. Throws ConfigError.
Scenario parse_scenario(const std::string& text, const std::string& name = "scenario");
Scenario load_scenario(const std::string& path);
// Cross-field constraints (L * abar < 1, positive tolerances, ...). Throws ConfigError.
void validate(const Scenario& sc);

}  // namespace udsg
