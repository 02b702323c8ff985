// SPDX-License-Identifier: Apache-2.0
#include "udsg/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include "udsg/operators.hpp"
#include "udsg/transforms.hpp"

namespace udsg {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  std::string t = trim(v);
  auto r = std::from_chars(t.data(), t.data() + t.size(), out);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  std::string t = trim(v);
  auto r = std::from_chars(t.data(), t.data() + t.size(), out);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

Support to_support(const std::string& key, const std::string& v) {
  auto parts = split(v, ':');
  if (parts.size() != 2) throw ConfigError(key + ": expected alpha:beta, got '" + v + "'");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::vector<Support> to_supports(const std::string& key, const std::string& v) {
  std::vector<Support> out;
  for (const auto& item : split(v, ',')) out.push_back(to_support(key, item));
  return out;
}

std::vector<cplx> to_complex_list(const std::string& key, const std::string& v) {
  std::vector<cplx> out;
  try {
    for (const auto& item : split(v, ',')) out.push_back(parse_complex(item));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
  return out;
}

std::string support_text(const std::vector<Support>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + fmt(x.alpha) + ":" + fmt(x.beta);
  return s;
}

std::string complex_list_text(const std::vector<cplx>& v) {
  std::string s;
  for (cplx z : v) s += (s.empty() ? "" : ", ") + format_complex(z);
  return s;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  static const std::regex re(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?$)");
  static const std::regex pure(R"(^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i$)");
  std::smatch m;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (std::regex_match(s, m, pure)) {
    double im = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return {0.0, m[1].str() == "-" ? -im : im};
  }
  if (std::regex_match(s, m, re) && m[1].matched) {
    double re_part = std::stod(m[1].str()), im = 0.0;
    if (m[2].matched) {
      im = m[3].matched ? std::stod(m[3].str()) : 1.0;
      if (m[2].str() == "-") im = -im;
    }
    return {re_part, im};
  }
  throw std::invalid_argument("cannot parse complex number '" + text + "'");
}

std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::string im = fmt(std::abs(z.imag()));
  return fmt(z.real()) + (z.imag() < 0.0 ? "-" : "+") + im + "i";
}

std::vector<std::pair<std::string, std::string>> Scenario::resolved() const {
  std::string pair_text;
  for (const auto& [a, b] : pairs)
    pair_text += (pair_text.empty() ? "" : ", ") + fmt(a.alpha) + ":" + fmt(a.beta) + "/" + fmt(b.alpha) + ":" + fmt(b.beta);
  std::vector<std::pair<std::string, std::string>> out{
      {"weights.s", fmt(weight_s)},
      {"weights.pmax", std::to_string(weight_pmax)},
      {"poly.L", fmt(L)},
      {"poly.N", std::to_string(N)},
      {"line.abar", fmt(abar)},
      {"line.tol", fmt(line_tol)},
      {"line.rule", line_rule},
      {"generator.kind", generator_kind},
      {"generator.eigs", complex_list_text(eigs)},
      {"generator.k", fmt(curve_k)},
      {"generator.C", fmt(curve_C)},
      {"generator.n", std::to_string(curve_n)},
      {"generator.y_step", fmt(curve_y_step)},
      {"generator.delta", fmt(curve_delta)},
      {"grid.t_max", fmt(t_max)},
      {"grid.points", std::to_string(points)},
      {"testfn.n", std::to_string(testfn_n)},
      {"testfn.s", fmt(testfn_s)},
      {"battery.supports", support_text(battery)},
      {"composition.pairs", pair_text},
      {"fundamental.supports", support_text(fundamental)},
      {"fundamental.origin_supports", support_text(fundamental_origin)},
      {"resolvent.t_max", fmt(resolvent_t_max)},
      {"resolvent.n", std::to_string(resolvent_n)},
      {"resolvent.s0", fmt(ramp_s0)},
      {"resolvent.s0_alt", fmt(ramp_s0_alt)},
      {"resolvent.lambdas", complex_list_text(lambdas)},
      {"growth.samples", std::to_string(growth_samples)},
      {"growth.rmax", fmt(growth_rmax)},
      {"fit.k", fmt(fit_k)},
      {"fit.C", fmt(fit_C)},
      {"fit.n", std::to_string(fit_n)},
      {"fit.samples", std::to_string(fit_samples)},
      {"fit.halfplane", fmt(fit_halfplane)},
      {"restriction.t_max", fmt(restriction_t_max)},
      {"refine.levels", std::to_string(refine_levels)},
      {"seed", std::to_string(seed)},
  };
  for (const auto& [k, v] : tolerances) out.emplace_back("tol." + k, fmt(v));
  return out;
}

Scenario parse_scenario(const std::string& text, const std::string& name) {
  Scenario sc;
  sc.name = name;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto dbl = [](double& dst) -> Setter { return [&dst](const std::string& k, const std::string& v) { dst = to_double(k, v); }; };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) {
      long long x = to_int(k, v);
      if (x < 0 || x > 1000000000) throw ConfigError(k + ": value out of range");
      dst = int(x);
    };
  };
  auto str = [](std::string& dst) -> Setter { return [&dst](const std::string&, const std::string& v) { dst = trim(v); }; };
  auto supports = [](std::vector<Support>& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = to_supports(k, v); };
  };
  auto complexes = [](std::vector<cplx>& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = to_complex_list(k, v); };
  };
  std::map<std::string, Setter> setters{
      {"weights.s", dbl(sc.weight_s)},
      {"weights.pmax", integer(sc.weight_pmax)},
      {"poly.L", dbl(sc.L)},
      {"poly.N", integer(sc.N)},
      {"line.abar", dbl(sc.abar)},
      {"line.tol", dbl(sc.line_tol)},
      {"line.rule", str(sc.line_rule)},
      {"generator.kind", str(sc.generator_kind)},
      {"generator.eigs", complexes(sc.eigs)},
      {"generator.k", dbl(sc.curve_k)},
      {"generator.C", dbl(sc.curve_C)},
      {"generator.n", integer(sc.curve_n)},
      {"generator.y_step", dbl(sc.curve_y_step)},
      {"generator.delta", dbl(sc.curve_delta)},
      {"grid.t_max", dbl(sc.t_max)},
      {"grid.points", integer(sc.points)},
      {"testfn.n", integer(sc.testfn_n)},
      {"testfn.s", dbl(sc.testfn_s)},
      {"battery.supports", supports(sc.battery)},
      {"composition.pairs",
       [&sc](const std::string& k, const std::string& v) {
         sc.pairs.clear();
         for (const auto& item : split(v, ',')) {
           auto ab = split(item, '/');
           if (ab.size() != 2) throw ConfigError(k + ": expected a:b/c:d, got '" + item + "'");
           sc.pairs.emplace_back(to_support(k, ab[0]), to_support(k, ab[1]));
         }
       }},
      {"fundamental.supports", supports(sc.fundamental)},
      {"fundamental.origin_supports", supports(sc.fundamental_origin)},
      {"resolvent.t_max", dbl(sc.resolvent_t_max)},
      {"resolvent.n", integer(sc.resolvent_n)},
      {"resolvent.s0", dbl(sc.ramp_s0)},
      {"resolvent.s0_alt", dbl(sc.ramp_s0_alt)},
      {"resolvent.lambdas", complexes(sc.lambdas)},
      {"growth.samples", integer(sc.growth_samples)},
      {"growth.rmax", dbl(sc.growth_rmax)},
      {"fit.k", dbl(sc.fit_k)},
      {"fit.C", dbl(sc.fit_C)},
      {"fit.n", integer(sc.fit_n)},
      {"fit.samples", integer(sc.fit_samples)},
      {"fit.halfplane", dbl(sc.fit_halfplane)},
      {"restriction.t_max", dbl(sc.restriction_t_max)},
      {"refine.levels", integer(sc.refine_levels)},
      {"seed",
       [&sc](const std::string& k, const std::string& v) {
         long long x = to_int(k, v);
         if (x < 0) throw ConfigError(k + ": must be nonnegative");
         sc.seed = (unsigned long long)x;
       }},
      {"out.dir", str(sc.out_dir)},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (key.rfind("tol.", 0) == 0) {
      sc.tolerances[key.substr(4)] = to_double(key, value);
      continue;
    }
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(key, value);
  }
  validate(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read scenario file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string name = path;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_scenario(ss.str(), name);
}

void validate(const Scenario& sc) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(sc.weight_s > 1.0, "weights.s must exceed 1");
  need(sc.weight_pmax >= 2, "weights.pmax must be at least 2");
  need(sc.L > 0.0, "poly.L must be positive");
  need(sc.N >= 1, "poly.N must be at least 1");
  need(sc.abar > 0.0, "line.abar must be positive");
  need(sc.L * sc.abar < 1.0, "constraint L * abar < 1 violated: L * abar = " + fmt(sc.L * sc.abar));
  need(sc.line_tol > 0.0, "line.tol must be positive");
  try {
    parse_rule(sc.line_rule);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("line.rule: ") + e.what());
  }
  need(sc.generator_kind == "diagonal" || sc.generator_kind == "curve", "generator.kind must be diagonal or curve");
  need(!sc.eigs.empty(), "generator.eigs must not be empty");
  need(sc.curve_k > 0.0 && sc.curve_n >= 1 && sc.curve_y_step > 0.0 && sc.curve_delta > 0.0,
       "generator curve parameters must be positive");
  need(sc.t_max > 0.0, "grid.t_max must be positive");
  need(sc.points >= 5, "grid.points must be at least 5");
  need(sc.testfn_n >= 256 && is_pow2(std::size_t(sc.testfn_n)), "testfn.n must be a power of two >= 256");
  need(sc.testfn_s > 1.0, "testfn.s must exceed 1");
  need(sc.battery.size() >= 5, "battery.supports needs at least 5 entries");
  for (const auto& b : sc.battery)
    need(b.alpha > 0.0 && b.alpha < b.beta && b.beta < sc.t_max, "battery.supports must lie in (0, grid.t_max)");
  need(!sc.pairs.empty(), "composition.pairs must not be empty");
  for (const auto& [a, b] : sc.pairs)
    for (const Support* x : {&a, &b})
      need(x->alpha > 0.0 && x->alpha < x->beta && x->beta < 0.5 * sc.t_max,
           "composition.pairs supports must lie in (0, grid.t_max / 2)");
  for (const auto& b : sc.fundamental)
    need(b.alpha > 0.0 && b.alpha < b.beta && b.beta < sc.t_max, "fundamental.supports must lie in (0, grid.t_max)");
  for (const auto& b : sc.fundamental_origin)
    need(b.alpha < 0.0 && 0.0 < b.beta && b.beta < sc.t_max, "fundamental.origin_supports must contain 0");
  need(sc.resolvent_t_max > 2.0, "resolvent.t_max must exceed 2");
  need(sc.resolvent_n >= 256 && is_pow2(std::size_t(sc.resolvent_n)), "resolvent.n must be a power of two >= 256");
  need(sc.ramp_s0 > 0.0 && sc.ramp_s0_alt > 0.0, "resolvent ramp lengths must be positive");
  need(sc.growth_samples >= 1 && sc.growth_rmax > 0.0, "growth sampling parameters must be positive");
  need(sc.fit_k > 0.0 && sc.fit_n >= 1 && sc.fit_samples >= 10, "fit parameters out of range");
  need(sc.restriction_t_max > 0.0 && sc.restriction_t_max < sc.t_max, "restriction.t_max must lie in (0, grid.t_max)");
  need(sc.refine_levels >= 1 && sc.refine_levels <= 6, "refine.levels must lie in [1, 6]");
  for (const auto& [k, v] : sc.tolerances) need(v > 0.0, "tol." + k + " must be positive");

  double omega = kNegInf;
  if (sc.generator_kind == "diagonal") {
    for (cplx m : sc.eigs) omega = std::max(omega, m.real());
  } else {
    auto G = curve_generator(make_gevrey(sc.weight_s, sc.weight_pmax), sc.curve_k, sc.curve_C, sc.curve_n,
                             sc.curve_y_step, sc.curve_delta);
    omega = G.spectral_abscissa();
  }
  need(sc.abar - omega >= 0.1, "line.abar = " + fmt(sc.abar) + " must lie at least 0.1 right of the spectral abscissa " + fmt(omega));
  for (cplx l : sc.lambdas)
    need(l.real() > omega, "resolvent.lambdas must lie right of the spectral abscissa " + fmt(omega));
}

}  // namespace udsg
