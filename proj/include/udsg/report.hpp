// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace udsg {

using Json = nlohmann::ordered_json;

struct CheckResult {
  std::string name;
  std::string tag;         // statement the check verifies
  std::string comparison;  // "le": value <= tolerance, "ge": value >= tolerance, "finite"
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Json detail = Json::object();
  double seconds = 0.0;  // wall time; kept out of report.json
};

// Decides pass from comparison, value and tolerance (non-finite values fail).
void decide(CheckResult& c);

struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add(const std::vector<double>& row);
  void add_text(std::vector<std::string> row);
};

struct RunResults {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  bool all_pass() const;
};

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_number(double v);

// report.json content; the timestamp is the only run-dependent field.
Json report_json(const RunResults& r, const std::string& timestamp);
std::string utc_timestamp();

// Writes report.json and every table as CSV into dir (created if missing).
// Returns the written paths. Throws ReportError naming the failing path.
std::vector<std::string> emit_report(const RunResults& r, const std::string& dir);

}  // namespace udsg
