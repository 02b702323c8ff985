// SPDX-License-Identifier: Apache-2.0
#include "udsg/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace udsg {

void decide(CheckResult& c) {
  if (c.comparison == "finite") {
    c.pass = std::isfinite(c.value);
  } else if (c.comparison == "ge") {
    c.pass = std::isfinite(c.value) && c.value >= c.tolerance;
  } else {
    c.pass = std::isfinite(c.value) && c.value <= c.tolerance;
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void Table::add(const std::vector<double>& row) {
  std::vector<std::string> s;
  for (double v : row) s.push_back(format_number(v));
  rows.push_back(std::move(s));
}

void Table::add_text(std::vector<std::string> row) { rows.push_back(std::move(row)); }

bool RunResults::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

// Non-finite numbers are stored as strings so the document stays valid JSON.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(format_number(v)); }

Json sanitize(const Json& j) {
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = sanitize(it.value());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& x : j) out.push_back(sanitize(x));
    return out;
  }
  return j;
}

}  // namespace

Json report_json(const RunResults& r, const std::string& timestamp) {
  Json j;
  j["schema"] = "udsg-report/1";
  j["scenario"] = r.scenario;
  j["timestamp"] = timestamp;
  Json cfg = Json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  Json checks = Json::array();
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["tag"] = c.tag;
    e["value"] = number(c.value);
    e["tolerance"] = number(c.tolerance);
    e["comparison"] = c.comparison;
    e["pass"] = c.pass;
    e["detail"] = sanitize(c.detail);
    checks.push_back(e);
    passed += c.pass ? 1 : 0;
  }
  j["checks"] = checks;
  Json files = Json::array();
  for (const auto& t : r.tables) files.push_back(t.file);
  j["files"] = files;
  j["summary"] = {{"total", r.checks.size()}, {"passed", passed}, {"failed", r.checks.size() - passed}};
  return j;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> emit_report(const RunResults& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ReportError("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  auto open = [&](const std::string& name) {
    std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path);
    if (!out) throw ReportError("cannot write " + path);
    paths.push_back(path);
    return out;
  };
  {
    auto out = open("report.json");
    out << report_json(r, utc_timestamp()).dump(2) << '\n';
    if (!out) throw ReportError("write failed for " + paths.back());
  }
  for (const auto& t : r.tables) {
    auto out = open(t.file);
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    if (!out) throw ReportError("write failed for " + paths.back());
  }
  return paths;
}

}  // namespace udsg
