// SPDX-License-Identifier: Apache-2.0
#include "udsg/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include "udsg/operators.hpp"
#include "udsg/semigroup.hpp"

namespace udsg {

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c{
      {"weights.log_convexity", "M.1 log-convexity", "le", 1e-12},
      {"weights.summability", "M.3' summability of 1/m_p", "le", 1e-6},
      {"weights.assoc_value", "associated function value", "le", 1e-12},
      {"weights.assoc_monotone", "associated function monotonicity", "le", 0.0},
      {"ultrapoly.lower_bound", "ultrapolynomial lower bound on the region", "le", 0.0},
      {"ultrapoly.upper_fit", "ultrapolynomial upper bound rate L1 <= 2L", "le", 2.0},
      {"ultrapoly.conjugate_example", "exponential conjugation example", "le", 0.0},
      {"ultrapoly.conjugate_identity", "exponential conjugation operator identity", "le", 1e-9},
      {"ultrapoly.combinatorial", "binomial and power inequalities", "le", 0.0},
      {"ultrapoly.conjugate_fit", "conjugated coefficient growth bound", "finite", 0.0},
      {"transforms.multiplier_roundtrip", "multiplier isomorphism round trip", "le", 1e-10},
      {"transforms.cauchy", "Cauchy estimate for 1/P", "le", 1.0},
      {"transforms.kernel_single", "single-factor kernel inversion", "le", 1e-7},
      {"transforms.kernel_convergence", "kernel self-convergence", "le", 1e-6},
      {"transforms.kernel_imag", "kernel imaginary residue", "le", 1e-10},
      {"transforms.kernel_envelope", "kernel exponential envelope", "finite", 0.0},
      {"semigroup.convolution_oracle", "bounded-generator representation", "le", 1e-6},
      {"semigroup.commutation", "S(t)A = AS(t)", "le", 1e-8},
      {"semigroup.decoupling", "diagonal decoupling", "le", 1e-12},
      {"semigroup.identity", "convoluted-semigroup identity", "le", 1e-6},
      {"semigroup.identity_order", "identity residual refinement order", "ge", 4.0},
      {"semigroup.composition", "U.6 composition law", "le", 1e-5},
      {"semigroup.causal_convolution", "U.1 causal and full convolution agree", "le", 1e-12},
      {"semigroup.fundamental", "fundamental solution, phi(0) = 0", "le", 1e-6},
      {"semigroup.fundamental_origin", "fundamental solution, phi(0) != 0", "le", 1e-5},
      {"semigroup.resolvent", "resolvent reconstruction", "le", 1e-6},
      {"semigroup.resolvent_ramp", "ramp-shape independence", "le", 1e-6},
      {"semigroup.nondegeneracy", "U.2 nondegeneracy", "ge", 1e-8},
      {"semigroup.restriction", "restriction consistency", "le", 1e-7},
      {"operators.growth_fit", "resolvent growth on the region", "le", 1.5},
      {"operators.halfplane_fit", "resolvent growth on a half-plane", "finite", 0.0},
  };
  return c;
}

void validate_checks(const Scenario& sc, const std::vector<std::string>& selected) {
  std::set<std::string> names;
  for (const auto& c : check_catalog()) names.insert(c.name);
  for (const auto& s : selected)
    if (!names.count(s)) throw ConfigError("unknown check '" + s + "'");
  for (const auto& [k, v] : sc.tolerances)
    if (!names.count(k)) throw ConfigError("tol." + k + ": unknown check");
}

namespace {

std::vector<double> grid(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

// Composite 16-point Gauss-Legendre nodes and weights on [a, b].
void gauss_nodes(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
  static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                               0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                               0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  double hw = 0.5 * (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double c = a + (2 * p + 1) * hw;
    for (int k = 0; k < 8; ++k) {
      x.push_back(c - hw * gx[k]);
      w.push_back(hw * gw[k]);
      x.push_back(c + hw * gx[k]);
      w.push_back(hw * gw[k]);
    }
  }
}

std::vector<double> poly_derivative(const std::vector<double>& p) {
  std::vector<double> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(double(i) * p[i]);
  return d;
}

double poly_eval(const std::vector<double>& p, double x) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

class Context {
 public:
  explicit Context(const Scenario& s) : sc(s) {}
  const Scenario& sc;
  std::vector<Table> tables;

  const WeightSequence& W() {
    if (!W_) W_ = make_gevrey(sc.weight_s, sc.weight_pmax);
    return *W_;
  }
  const Ultrapolynomial& P() {
    if (!P_) P_ = build(W(), sc.L, sc.N);
    return *P_;
  }
  const Generator& gen() {
    if (!gen_) {
      gen_ = sc.generator_kind == "curve"
                 ? curve_generator(W(), sc.curve_k, sc.curve_C, sc.curve_n, sc.curve_y_step, sc.curve_delta)
                 : diagonal_generator(sc.eigs);
    }
    return *gen_;
  }
  BromwichLine line_for(double t_max) {
    LineDesign d;
    d.abar = sc.abar;
    d.t_max = t_max;
    d.tol = sc.line_tol;
    d.rule = parse_rule(sc.line_rule);
    return design_semigroup_line(gen(), P(), d);
  }
  const ConvolutedSemigroup& S() {
    if (!S_) S_ = construct(gen(), P(), line_for(sc.t_max), grid(0.0, sc.t_max, std::size_t(sc.points)));
    return *S_;
  }
  const BoundReport& bounds() {
    if (!bounds_) bounds_ = verify_growth_bounds(P(), region_samples(sc.L, std::size_t(sc.growth_samples), 1e-2, sc.growth_rmax));
    return *bounds_;
  }
  TestFunction bump(const Support& s) { return gevrey_bump(sc.testfn_s, s.alpha, s.beta, std::size_t(sc.testfn_n)); }
  const std::vector<TestFunction>& battery() {
    if (battery_.empty())
      for (const auto& s : sc.battery) battery_.push_back(bump(s));
    return battery_;
  }
  std::mt19937_64 rng(unsigned salt) const { return std::mt19937_64(sc.seed * 1000003ULL + salt); }

 private:
  std::optional<WeightSequence> W_;
  std::optional<Ultrapolynomial> P_;
  std::optional<Generator> gen_;
  std::optional<ConvolutedSemigroup> S_;
  std::optional<BoundReport> bounds_;
  std::vector<TestFunction> battery_;
};

using Runner = std::function<void(Context&, CheckResult&)>;

void log_convexity(Context& cx, CheckResult& c) {
  auto r = verify_conditions(cx.W());
  c.value = std::max(0.0, -r.m1_min_slack);
  c.detail = {{"min_slack", r.m1_min_slack}, {"witness", r.m1_witness}, {"m2_pass", r.m2_pass},
              {"m2_A", r.m2_A},             {"m2_H", r.m2_H},             {"m3_pass", r.m3_pass},
              {"m3_constant", r.m3_constant}};
}

void summability(Context& cx, CheckResult& c) {
  auto r = verify_conditions(cx.W());
  double s = cx.sc.weight_s;
  double ref = s == 2.0 ? kPi * kPi / 6.0 : zeta_tail(s, 0);
  c.value = std::abs(r.m3prime_partial + r.m3prime_tail - ref);
  c.detail = {{"partial", r.m3prime_partial}, {"tail", r.m3prime_tail}, {"reference", ref},
              {"growth_exponent", r.growth_exponent}, {"pass_surrogate", r.m3prime_pass}};
}

double brute_assoc(const WeightSequence& W, double rho) {
  double best = 0.0;
  for (int p = 1; p <= W.pmax; ++p) best = std::max(best, p * std::log(rho) - W.logM[std::size_t(p)]);
  return best;
}

void assoc_value(Context& cx, CheckResult& c) {
  const auto& W = cx.W();
  double a4 = assoc(W, 4.0), b4 = brute_assoc(W, 4.0);
  double err = std::abs(a4 - b4);
  if (cx.sc.weight_s == 2.0) err = std::max(err, std::abs(a4 - std::log(4.0)));
  auto rng = cx.rng(1);
  std::uniform_real_distribution<double> u(std::log(1e-2), std::log(1e6));
  double sweep = 0.0;
  for (int i = 0; i < 200; ++i) {
    double rho = std::exp(u(rng));
    sweep = std::max(sweep, std::abs(assoc(W, rho) - brute_assoc(W, rho)));
  }
  c.value = std::max(err, sweep);
  c.detail = {{"assoc_4", a4}, {"brute_4", b4}, {"sweep_error", sweep}};
}

void assoc_monotone(Context& cx, CheckResult& c) {
  auto rng = cx.rng(2);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e8));
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    double a = std::exp(u(rng)), b = std::exp(u(rng));
    if (a > b) std::swap(a, b);
    if (assoc(cx.W(), a) > assoc(cx.W(), b)) ++bad;
  }
  c.value = bad;
  c.detail = {{"pairs", 1000}};
}

void lower_bound(Context& cx, CheckResult& c) {
  const auto& r = cx.bounds();
  c.value = double(r.violations);
  c.detail = {{"samples", r.samples.size()},
              {"outside_proof_range", r.outside_proof_range},
              {"violations_outside_proof_range", r.violations_outside},
              {"violations_strong_variant", r.violations_alt},
              {"min_margin", r.min_margin},
              {"min_margin_strong_variant", r.min_margin_alt},
              {"saturated", r.saturated}};
  Table t{"growth.csv", {"re", "im", "abs", "log_abs_P", "lower_margin", "lower_margin_strong", "re_zeta2_nonneg"}, {}};
  for (const auto& s : r.samples)
    t.add({s.zeta.real(), s.zeta.imag(), std::abs(s.zeta), s.log_abs_P, s.lower_margin, s.lower_margin_alt,
           s.re_zeta2_nonneg ? 1.0 : 0.0});
  cx.tables.push_back(std::move(t));
}

void upper_fit(Context& cx, CheckResult& c) {
  const auto& r = cx.bounds();
  c.value = r.upper.found ? r.upper.rate / cx.sc.L : std::numeric_limits<double>::infinity();
  c.detail = {{"found", r.upper.found}, {"L1", r.upper.rate}, {"log_C", r.upper.log_constant}, {"L", cx.sc.L}};
}

void conjugate_example(Context&, CheckResult& c) {
  auto b = exp_conjugate({1.0, 0.0, 1.0}, 1.0, 2).b;
  std::vector<double> want{2.0, -2.0, 1.0};
  double err = 0.0;
  for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(b[i] - want[i]));
  c.value = err;
  c.detail = {{"b", b}};
}

void conjugate_identity(Context& cx, CheckResult& c) {
  auto rng = cx.rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 8);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    int P = deg(rng);
    double shift = 2.0 * u(rng);
    std::vector<double> a(std::size_t(P) + 1), g(7);
    for (auto& v : a) v = u(rng);
    for (auto& v : g) v = u(rng);
    auto b = exp_conjugate(a, shift, P).b;
    std::vector<std::vector<double>> gd{g};
    for (int i = 0; i < P; ++i) gd.push_back(poly_derivative(gd.back()));
    for (int s = 0; s < 10; ++s) {
      double x = -1.0 + 0.2 * s, lhs = 0.0, rhs = 0.0;
      for (int j = 0; j <= P; ++j) lhs += b[std::size_t(j)] * poly_eval(gd[std::size_t(j)], x);
      // e^{shift x} d^p (e^{-shift x} g) by the Leibniz rule.
      for (int p = 0; p <= P; ++p)
        for (int i = 0; i <= p; ++i)
          rhs += a[std::size_t(p)] * std::exp(log_binomial(p, i)) * std::pow(-shift, p - i) * poly_eval(gd[std::size_t(i)], x);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  c.value = worst;
  c.detail = {{"cases", 20}};
}

void combinatorial(Context&, CheckResult& c) {
  int bad = 0;
  for (int j = 1; j <= 40; ++j)
    for (int k = 1; k <= 40; ++k) {
      double lk = k * std::log(double(k));
      if (log_binomial(j + k, j) > (k + 1) * std::log(2.0) + lk + j + 1e-12) ++bad;
      if (k * std::log(double(j)) > lk + j + 1e-12) ++bad;
    }
  c.value = bad;
  c.detail = {{"pairs", 1600}};
}

void conjugate_fit(Context& cx, CheckResult& c) {
  const auto& P = cx.P();
  if (P.log_even_coeffs().empty()) throw std::runtime_error("coefficients unavailable for this N");
  std::vector<SignedLog> a(P.coeffs().size());
  for (std::size_t j = 0; j < P.log_even_coeffs().size(); ++j) a[2 * j] = SignedLog{1.0, P.log_even_coeffs()[j]};
  auto r = exp_conjugate_log(a, cx.sc.abar, int(a.size()) - 1, &cx.W());
  auto d = coefficient_decay_fit(P);
  c.value = r.fitted ? r.fit.log_constant : std::numeric_limits<double>::infinity();
  c.detail = {{"Lhat", r.fit.rate}, {"log_C", r.fit.log_constant}, {"shift", cx.sc.abar},
              {"decay_L2", d.rate}, {"decay_log_C1", d.log_constant}};
}

void multiplier_roundtrip(Context& cx, CheckResult& c) {
  double worst = 0.0;
  Json per = Json::array();
  for (const auto& f : cx.battery()) {
    auto g = divide_P(cx.P(), apply_P(cx.P(), f));
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < f.n(); ++j) {
      num += std::norm(g.values()[j] - f.values()[j]);
      den += std::norm(f.values()[j]);
    }
    double e = std::sqrt(num / den);
    per.push_back(e);
    worst = std::max(worst, e);
  }
  c.value = worst;
  c.detail = {{"per_function", per}};
}

void cauchy(Context& cx, CheckResult& c) {
  auto r = cauchy_check(cx.P(), {0.0, 1.0, 10.0}, 0.5 / cx.sc.L, 1);
  double worst = 0.0;
  Json pts = Json::array();
  for (const auto& p : r.points) {
    worst = std::max(worst, std::abs(p.derivative) / p.majorant);
    pts.push_back({{"xi", p.xi}, {"abs_derivative", std::abs(p.derivative)}, {"majorant", p.majorant},
                   {"constant", p.constant}});
  }
  c.value = worst;
  c.detail = {{"radius", r.radius}, {"fitted_constant", r.fitted_constant}, {"points", pts}};
}

void kernel_single(Context& cx, CheckResult& c) {
  auto P1 = build(cx.W(), 1.0, 1);
  LineDesign d;
  d.abar = 0.5;
  d.t_max = 3.0;
  d.tol = 1e-8;
  d.t_min = 0.1;
  auto line = design_line(P1, d);
  auto t = grid(0.1, 3.0, 59);
  auto k = bromwich_kernel(P1, line, t);
  // Only m_1 enters: P = 1 + (L zeta / m_1)^2, K = (mu / 2) e^{-mu t} with mu = m_1 / L.
  double mu = cx.W().ratio(1);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(k.K[i] - 0.5 * mu * std::exp(-mu * t[i])));
  c.value = worst;
  c.detail = {{"height", line.height}, {"nodes", line.nodes}, {"oscillatory_certificate", line.oscillatory}};
}

void kernel_convergence(Context& cx, CheckResult& c) {
  const auto& S = cx.S();
  auto fine = bromwich_kernel(cx.P(), refine(S.line), S.tgrid);
  double worst = 0.0;
  for (std::size_t i = 0; i < S.tgrid.size(); ++i) {
    worst = std::max(worst, std::abs(fine.K[i] - S.kernel.K[i]));
    worst = std::max(worst, std::abs(fine.Theta[i] - S.kernel.Theta[i]));
  }
  c.value = worst;
  c.detail = {{"height", S.line.height}, {"nodes", S.line.nodes}, {"refined_nodes", fine.line.nodes},
              {"certificate", S.line.certificate}};
  Table t{"kernel.csv", {"t", "K", "Theta"}, {}};
  for (std::size_t i = 0; i < S.tgrid.size(); ++i) t.add({S.tgrid[i], S.kernel.K[i], S.kernel.Theta[i]});
  cx.tables.push_back(std::move(t));
}

void kernel_imag(Context& cx, CheckResult& c) { c.value = cx.S().kernel.imag_residue; }

void kernel_envelope(Context& cx, CheckResult& c) {
  const auto& k = cx.S().kernel;
  double C = 0.0;
  for (std::size_t i = 0; i < k.tgrid.size(); ++i) C = std::max(C, std::abs(k.K[i]) * std::exp(-k.tgrid[i]));
  c.value = C;
  c.detail = {{"C_rate_1", C}, {"C_rate_abar", k.envelope}};
}

void convolution_oracle(Context& cx, CheckResult& c) {
  const auto& S = cx.S();
  const auto& A = S.gen;
  const Eigen::Index n = Eigen::Index(A.dim());
  std::vector<double> x, w;
  std::vector<std::size_t> start{0};
  for (std::size_t i = 1; i < S.tgrid.size(); ++i) {
    gauss_nodes(0.0, S.tgrid[i], 8, x, w);
    start.push_back(x.size());
  }
  std::vector<double> lag(x.size());
  std::size_t pos = 0;
  for (std::size_t i = 1; i < S.tgrid.size(); ++i)
    for (; pos < start[i]; ++pos) lag[pos] = S.tgrid[i] - x[pos];
  auto K = kernel_values(S.P, S.line, lag);
  Eigen::MatrixXd err = Eigen::MatrixXd::Zero(n, n), scale = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 1; i < S.tgrid.size(); ++i) {
    Matrix ref = Matrix::Zero(n, n);
    for (std::size_t q = start[i - 1]; q < start[i]; ++q) ref += (w[q] * K[q]) * A.expm(x[q]);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index s = 0; s < n; ++s) {
        err(r, s) = std::max(err(r, s), std::abs(S.S[i](r, s) - ref(r, s)));
        scale(r, s) = std::max(scale(r, s), std::abs(ref(r, s)));
      }
  }
  double worst = 0.0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index s = 0; s < n; ++s) worst = std::max(worst, err(r, s) / (scale(r, s) > 1e-12 ? scale(r, s) : 1.0));
  c.value = worst;
  c.detail = {{"max_abs_error", err.maxCoeff()}, {"grid_points", S.tgrid.size()}};
}

void commutation(Context& cx, CheckResult& c) { c.value = commutation_residual(cx.S()); }

void decoupling(Context& cx, CheckResult& c) {
  c.value = cx.S().gen.is_diagonal() ? max_offdiagonal(cx.S()) : 0.0;
  c.detail = {{"applicable", cx.S().gen.is_diagonal()}};
}

void identity(Context& cx, CheckResult& c) {
  const auto& S = cx.S();
  const Eigen::Index n = Eigen::Index(S.gen.dim());
  Table t{"norms.csv", {"t", "norm_S", "norm_S_line", "identity_residual"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < S.tgrid.size(); ++i) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) r = std::max(r, identity_residual(S, Vector::Unit(n, k), i));
    worst = std::max(worst, r);
    t.add({S.tgrid[i], operator_norm(S.S[i]), operator_norm(S.S_line[i]), r});
  }
  c.value = worst;
  cx.tables.push_back(std::move(t));
}

void identity_order(Context& cx, CheckResult& c) {
  const auto& sc = cx.sc;
  std::size_t div = std::size_t(1) << (sc.refine_levels - 1);
  std::size_t start = (std::size_t(sc.points) - 1) % div == 0 ? (std::size_t(sc.points) - 1) / div + 1 : std::size_t(sc.points);
  if (start < 5) start = 5;
  auto rows = identity_refinement(cx.gen(), cx.P(), cx.S().line, sc.t_max, start, sc.refine_levels);
  const double floor = 1e-11;
  double worst = std::numeric_limits<double>::infinity();
  Table t{"refinement.csv", {"points", "dt", "residual", "ratio"}, {}};
  Json rj = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.add({double(rows[i].points), rows[i].dt, rows[i].residual, rows[i].ratio});
    rj.push_back({{"points", rows[i].points}, {"residual", rows[i].residual}, {"ratio", rows[i].ratio}});
    if (i > 0 && rows[i - 1].residual > floor) worst = std::min(worst, rows[i].ratio);
  }
  c.value = worst;
  c.detail = {{"floor", floor}, {"rows", rj}};
  cx.tables.push_back(std::move(t));
}

void composition(Context& cx, CheckResult& c) {
  double worst = 0.0;
  Json per = Json::array();
  for (const auto& [a, b] : cx.sc.pairs) {
    double r = composition_residual(cx.S(), cx.bump(a), cx.bump(b));
    per.push_back(r);
    worst = std::max(worst, r);
  }
  c.value = worst;
  c.detail = {{"per_pair", per}};
}

void causal_convolution(Context& cx, CheckResult& c) {
  double worst = 0.0;
  for (const auto& [a, b] : cx.sc.pairs) {
    auto f = cx.bump(a), g = cx.bump(b);
    worst = std::max(worst, std::abs(composition_residual(cx.S(), f, g, true) - composition_residual(cx.S(), f, g, false)));
  }
  c.value = worst;
}

double fundamental_max(Context& cx, const std::vector<Support>& supports, Json& per) {
  const auto& S = cx.S();
  const Eigen::Index n = Eigen::Index(S.gen.dim());
  double worst = 0.0;
  for (const auto& s : supports) {
    auto f = cx.bump(s);
    Matrix D = fundamental_defect(S, f);
    double r = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) r = std::max(r, D.col(k).norm() / 2.0);
    per.push_back({{"support", {s.alpha, s.beta}}, {"phi0", std::abs(f.at(0.0))}, {"residual", r}});
    worst = std::max(worst, r);
  }
  return worst;
}

void fundamental(Context& cx, CheckResult& c) {
  Json per = Json::array();
  c.value = fundamental_max(cx, cx.sc.fundamental, per);
  c.detail = {{"cases", per}};
}

void fundamental_origin(Context& cx, CheckResult& c) {
  Json per = Json::array();
  c.value = fundamental_max(cx, cx.sc.fundamental_origin, per);
  c.detail = {{"cases", per}};
}

TestFunction ramp(const Scenario& sc, double s0) {
  double w0 = -(std::max(sc.ramp_s0, sc.ramp_s0_alt) + 1.0);
  return ramp_cutoff(sc.testfn_s, s0, std::size_t(sc.resolvent_n), {w0, sc.resolvent_t_max + 2.0});
}

void resolvent(Context& cx, CheckResult& c) {
  const auto& S = cx.S();
  auto g = ramp(cx.sc, cx.sc.ramp_s0);
  const Eigen::Index n = Eigen::Index(S.gen.dim());
  Matrix I = Matrix::Identity(n, n);
  double worst = 0.0;
  Json per = Json::array();
  for (cplx lam : cx.sc.lambdas) {
    Matrix Gt = resolvent_reconstruct(S, lam, g);
    double e = operator_norm(Gt - S.gen.resolvent(lam));
    double sub = operator_norm((lam * I - S.gen.matrix()) * Gt - I);
    per.push_back({{"lambda", format_complex(lam)}, {"error", e}, {"substitution", sub},
                   {"tail", resolvent_tail(S.gen, lam, cx.sc.resolvent_t_max)}});
    worst = std::max({worst, e, sub});
  }
  c.value = worst;
  c.detail = {{"cases", per}};
}

void resolvent_ramp(Context& cx, CheckResult& c) {
  const auto& S = cx.S();
  auto g1 = ramp(cx.sc, cx.sc.ramp_s0), g2 = ramp(cx.sc, cx.sc.ramp_s0_alt);
  double worst = 0.0;
  for (cplx lam : cx.sc.lambdas)
    worst = std::max(worst, operator_norm(resolvent_reconstruct(S, lam, g1) - resolvent_reconstruct(S, lam, g2)));
  c.value = worst;
  c.detail = {{"s0", cx.sc.ramp_s0}, {"s0_alt", cx.sc.ramp_s0_alt}};
}

void nondegen(Context& cx, CheckResult& c) {
  auto r = nondegeneracy(cx.S(), cx.battery(), c.tolerance);
  c.value = r.margin;
  c.detail = {{"per_basis_vector", r.max_norm}};
}

void restriction(Context& cx, CheckResult& c) {
  const auto& sc = cx.sc;
  double a = sc.restriction_t_max;
  std::size_t pts = std::size_t(std::llround(double(sc.points - 1) * a / sc.t_max)) + 1;
  auto Sa = construct(cx.gen(), cx.P(), cx.line_for(a), grid(0.0, a, std::max<std::size_t>(pts, 5)));
  auto f = cx.bump({0.05 * a, 0.9 * a});
  c.value = operator_norm(udsg_apply(Sa, f) - udsg_apply(cx.S(), f));
  c.detail = {{"t_max_a", a}, {"t_max_b", sc.t_max}};
}

void growth_fit(Context& cx, CheckResult& c) {
  const auto& sc = cx.sc;
  auto G = curve_generator(cx.W(), sc.fit_k, sc.fit_C, sc.fit_n, sc.curve_y_step, sc.curve_delta);
  double ymax = sc.fit_n * sc.curve_y_step + 5.0;
  auto samples = omega_samples(cx.W(), sc.fit_k, sc.fit_C, std::size_t(sc.fit_samples), ymax, 0.01, 3.0);
  auto f = resolvent_bound_fit(G, samples, cx.W(), sc.fit_k, sc.fit_C);
  c.value = f.found ? f.k_prime : std::numeric_limits<double>::infinity();
  c.detail = {{"found", f.found}, {"k_prime", f.k_prime}, {"log_C_prime", f.log_C}, {"max_norm", f.max_norm},
              {"samples", f.samples}};
  Table t{"spectrum.csv", {"kind", "re", "im"}, {}};
  for (cplx m : cx.gen().spectrum()) t.add_text({"generator", format_number(m.real()), format_number(m.imag())});
  for (cplx m : G.spectrum()) t.add_text({"curve", format_number(m.real()), format_number(m.imag())});
  for (double y = -ymax; y <= ymax + 1e-12; y += 0.5)
    t.add_text({"boundary", format_number(omega_boundary(cx.W(), sc.fit_k, sc.fit_C, y)), format_number(y)});
  for (cplx s : samples) t.add_text({"sample", format_number(s.real()), format_number(s.imag())});
  cx.tables.push_back(std::move(t));
}

void halfplane_fit(Context& cx, CheckResult& c) {
  auto samples = halfplane_samples(cx.sc.fit_halfplane, std::size_t(cx.sc.fit_samples), 50.0, 0.01, 10.0);
  auto f = resolvent_halfplane_fit(cx.gen(), samples, cx.W(), cx.sc.fit_halfplane);
  c.value = f.found ? f.log_C : std::numeric_limits<double>::infinity();
  c.detail = {{"found", f.found}, {"k_prime", f.k_prime}, {"log_C_prime", f.log_C}, {"max_norm", f.max_norm},
              {"a", cx.sc.fit_halfplane}};
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r{
      {"weights.log_convexity", log_convexity},
      {"weights.summability", summability},
      {"weights.assoc_value", assoc_value},
      {"weights.assoc_monotone", assoc_monotone},
      {"ultrapoly.lower_bound", lower_bound},
      {"ultrapoly.upper_fit", upper_fit},
      {"ultrapoly.conjugate_example", conjugate_example},
      {"ultrapoly.conjugate_identity", conjugate_identity},
      {"ultrapoly.combinatorial", combinatorial},
      {"ultrapoly.conjugate_fit", conjugate_fit},
      {"transforms.multiplier_roundtrip", multiplier_roundtrip},
      {"transforms.cauchy", cauchy},
      {"transforms.kernel_single", kernel_single},
      {"transforms.kernel_convergence", kernel_convergence},
      {"transforms.kernel_imag", kernel_imag},
      {"transforms.kernel_envelope", kernel_envelope},
      {"semigroup.convolution_oracle", convolution_oracle},
      {"semigroup.commutation", commutation},
      {"semigroup.decoupling", decoupling},
      {"semigroup.identity", identity},
      {"semigroup.identity_order", identity_order},
      {"semigroup.composition", composition},
      {"semigroup.causal_convolution", causal_convolution},
      {"semigroup.fundamental", fundamental},
      {"semigroup.fundamental_origin", fundamental_origin},
      {"semigroup.resolvent", resolvent},
      {"semigroup.resolvent_ramp", resolvent_ramp},
      {"semigroup.nondegeneracy", nondegen},
      {"semigroup.restriction", restriction},
      {"operators.growth_fit", growth_fit},
      {"operators.halfplane_fit", halfplane_fit},
  };
  return r;
}

}  // namespace

RunResults run_suite(const Scenario& sc, const std::vector<std::string>& selected, std::ostream* log) {
  validate(sc);
  validate_checks(sc, selected);
  std::set<std::string> wanted(selected.begin(), selected.end());
  Context cx(sc);
  RunResults out;
  out.scenario = sc.name;
  out.config = sc.resolved();
  for (const auto& info : check_catalog()) {
    if (!wanted.empty() && !wanted.count(info.name)) continue;
    CheckResult c;
    c.name = info.name;
    c.tag = info.tag;
    c.comparison = info.comparison;
    auto ov = sc.tolerances.find(info.name);
    c.tolerance = ov != sc.tolerances.end() ? ov->second : info.tolerance;
    auto t0 = std::chrono::steady_clock::now();
    try {
      runners().at(info.name)(cx, c);
      decide(c);
    } catch (const std::exception& e) {
      c.value = std::numeric_limits<double>::quiet_NaN();
      c.pass = false;
      c.detail["error"] = e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log)
      *log << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << format_number(c.value)
           << "  tol=" << format_number(c.tolerance) << " (" << c.comparison << ")  " << c.seconds << "s\n"
           << std::flush;
    out.checks.push_back(std::move(c));
  }
  out.tables = std::move(cx.tables);
  return out;
}

}  // namespace udsg
