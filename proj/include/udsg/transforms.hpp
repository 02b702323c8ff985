// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "udsg/numerics.hpp"
#include "udsg/testfn.hpp"
#include "udsg/ultrapoly.hpp"

namespace udsg {

enum class Rule { trapezoid, gauss_composite };

const char* rule_name(Rule r);
Rule parse_rule(const std::string& s);

// Vertical contour Re lambda = abar, truncated to |Im lambda| <= height.
struct BromwichLine {
  double abar = 0.0;
  double height = 0.0;
  std::size_t nodes = 0;
  Rule rule = Rule::trapezoid;
  double tol = 1e-10;
  double spacing = 0.0;      // trapezoid step, or panel width for gauss-composite
  double certificate = 0.0;  // bound on the neglected part |Im lambda| > height
  bool oscillatory = false;  // certificate relies on e^{iyt} oscillation
  double t_min = 0.0;        // certificate valid for t >= t_min (0 when absolute)
};

struct LineDesign {
  double abar = 0.0;
  double t_max = 2.0;
  double t_lo = 0.0;   // most negative time to be evaluated
  double t_min = 0.1;  // smallest positive time the oscillatory certificate must cover
  double tol = 1e-10;
  double omega = kNegInf;  // spectral abscissa of the generator
  double rnorm = 1.0;      // bound for ||R(lambda)|| on the line
  Rule rule = Rule::trapezoid;
};

// Chooses spacing from the analyticity strip and height from a truncation
// certificate. Throws when L * abar >= 1 or the line is not right of omega.
BromwichLine design_line(const Ultrapolynomial& P, const LineDesign& d);
// Doubles the height and halves the spacing (panel width for gauss-composite).
BromwichLine refine(const BromwichLine& line);

// Absolute tail bound 2T/(2q-1) e^{-2 M_N(L T)} for int_{|y|>T} |1/P(y - i abar)| dy.
double absolute_tail(const Ultrapolynomial& P, double T);

struct LineNodes {
  std::vector<cplx> lambda;
  std::vector<double> weight;  // dy weights
};
LineNodes line_nodes(const BromwichLine& line);

// out[i * m + e] = (1/2 pi) sum_j coef[j * m + e] e^{lambda_j t_i}.
// Nodes are reduced in fixed blocks with pairwise summation across blocks.
std::vector<cplx> contour_sum(const LineNodes& nodes, const std::vector<cplx>& coef, std::size_t m,
                              const std::vector<double>& tgrid);

struct Kernel {
  std::vector<double> tgrid;
  std::vector<double> K;
  std::vector<double> Theta;
  BromwichLine line;
  double imag_residue = 0.0;  // max |Im| / max |Re| of the contour sums
  double envelope = 0.0;      // sup |K(t)| e^{-abar t}
  std::vector<std::size_t> flagged;  // grid points outside the certificate (t < t_min, t = 0)
  void write_csv(const std::string& path) const;
};

// Line-integral values of the kernel at arbitrary real times (two-sided).
std::vector<double> kernel_values(const Ultrapolynomial& P, const BromwichLine& line, const std::vector<double>& times,
                                  double scale = 1.0);

Kernel bromwich_kernel(const Ultrapolynomial& P, const BromwichLine& line, const std::vector<double>& tgrid,
                       double scale = 1.0);

// |f(t)| <= C e^{rate t} beyond the sampled interval.
struct Envelope {
  double C = 0.0;
  double rate = 0.0;
};

struct LaplaceResult {
  cplx value;
  double tail = 0.0;
  bool ok = true;
};

// int_a^b e^{-lambda t} f(t) dt on uniform samples (Gregory weights), with
// neglected tails beyond b (right) and before a (left) bounded by envelopes.
LaplaceResult laplace(double a, double dt, const std::vector<double>& f, cplx lambda, Envelope right,
                      Envelope left = {}, double tol = 1e-8);

// Fourier multipliers: spectrum times P(xi) or divided by P(xi).
TestFunction apply_P(const Ultrapolynomial& P, const TestFunction& f);
TestFunction divide_P(const Ultrapolynomial& P, const TestFunction& f);

struct CauchyPoint {
  double xi = 0.0;
  cplx derivative;        // (1/P)^{(n)}(xi) by the circle integral
  double majorant = 0.0;  // n!/r^n sup_circle |1/P|
  double constant = 0.0;  // |derivative| r^n / (n! e^{M((L+1)|xi|)})
};

struct CauchyReport {
  std::vector<CauchyPoint> points;
  double radius = 0.0;
  int order = 1;
  double fitted_constant = 0.0;  // max over points
  bool within_majorant = true;
};

CauchyReport cauchy_check(const Ultrapolynomial& P, const std::vector<double>& xis, double radius, int order,
                          std::size_t nodes = 256);

}  // namespace udsg
