// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "udsg/operators.hpp"
#include "udsg/testfn.hpp"
#include "udsg/transforms.hpp"
#include "udsg/ultrapoly.hpp"

namespace udsg {

// S_K(t) on a uniform grid of [0, t_max], built from the line integral
// S_line(t) = (1/2 pi i) int e^{lambda t} R(lambda) / P(-i lambda) d lambda as
// S_K(t) = S_line(t) - e^{tA} S_line(0), so S_K(0) = 0 and S_K' = A S_K + K I.
struct ConvolutedSemigroup {
  Generator gen;
  Ultrapolynomial P;
  BromwichLine line;
  std::vector<double> tgrid;
  std::vector<Matrix> S;
  std::vector<Matrix> S_line;
  Matrix S_line0;
  Kernel kernel;
  LineNodes nodes;
  std::vector<cplx> coef;  // R(lambda_j) / P(-i lambda_j), row-major n x n per node
};

// Fills omega and the resolvent bound on the line, then designs it.
BromwichLine design_semigroup_line(const Generator& gen, const Ultrapolynomial& P, LineDesign d);
// sup over the line Re lambda = abar of ||R(lambda)|| (exact for diagonal generators).
double line_resolvent_bound(const Generator& gen, double abar);

// Throws when the line is closer than 0.1 to the spectrum, the certificate
// exceeds the tolerance or the grid is not uniform in [0, t_max].
ConvolutedSemigroup construct(const Generator& gen, const Ultrapolynomial& P, const BromwichLine& line,
                              const std::vector<double>& tgrid);

// S_line at arbitrary real times (two-sided).
std::vector<Matrix> line_values(const ConvolutedSemigroup& S, const std::vector<double>& times);

// ||A int_0^t S x - S(t) x + Theta(t) x|| / (1 + ||S(t) x|| + Theta(t) ||x||),
// the integral by cumulative fourth-order quadrature on the grid.
double identity_residual(const ConvolutedSemigroup& S, const Vector& x, std::size_t ti);
// max over grid times and basis vectors.
double identity_residual_max(const ConvolutedSemigroup& S);

struct RefinementRow {
  std::size_t points = 0;
  double dt = 0.0;
  double residual = 0.0;
  double ratio = 0.0;  // previous residual / this residual
};
// Halves the grid step `levels` times on the same line.
std::vector<RefinementRow> identity_refinement(const Generator& gen, const Ultrapolynomial& P,
                                               const BromwichLine& line, double t_max, std::size_t points,
                                               int levels);

// max_t ||A S(t) - S(t) A|| / (1 + ||S(t)||).
double commutation_residual(const ConvolutedSemigroup& S);
// max off-diagonal |S_ij(t)| (meaningful for diagonal generators).
double max_offdiagonal(const ConvolutedSemigroup& S);

// G(phi) = (1/2 pi) int R(lambda) [P(-i lambda) L phi(lambda)] / P(-i lambda) dy on
// Re lambda = abar, L phi(lambda) = int phi(t) e^{lambda t} dt from a zero-padded FFT.
Matrix udsg_apply(const ConvolutedSemigroup& S, const TestFunction& phi);
// int (apply_P phi)(t) S_line(t) dt on phi's grid. Well conditioned only for small N.
Matrix udsg_apply_time(const ConvolutedSemigroup& S, const TestFunction& phi);
// sum_j a_{2j} (-1)^j int phi^{(2j)} S_line dt over the first `terms` nonzero coefficients.
Matrix udsg_apply_series(const ConvolutedSemigroup& S, const TestFunction& phi, int terms);

// ||G(phi *0 psi) - G(phi) G(psi)|| / (1 + ||G(phi)|| ||G(psi)||). Supports must lie in
// (0, t_max / 2) unless `causal` is false, in which case the full convolution is used.
double composition_residual(const ConvolutedSemigroup& S, const TestFunction& phi, const TestFunction& psi,
                            bool causal = true);

// G(-phi') - A G(phi) - phi(0) I.
Matrix fundamental_defect(const ConvolutedSemigroup& S, const TestFunction& phi);
// ||G(-phi') x - A G(phi) x - phi(0) x|| / (1 + ||x||).
double fundamental_residual(const ConvolutedSemigroup& S, const TestFunction& phi, const Vector& x);

// Bound for || int_T^inf e^{-lambda t} e^{tA} dt ||.
double resolvent_tail(const Generator& gen, cplx lambda, double T);

// G applied to g(t) e^{-lambda t} chi(t), where chi tapers smoothly to 0 over
// the last unit before g's window end minus one. Throws if Re lambda is not
// right of the spectrum or the tail beyond the taper exceeds tol.
Matrix resolvent_reconstruct(const ConvolutedSemigroup& S, cplx lambda, const TestFunction& g, double tol = 1e-8);

struct NondegeneracyReport {
  std::vector<double> max_norm;  // per basis vector, max over the battery of ||G(phi) x||
  double margin = 0.0;           // min over basis vectors
  bool pass = false;
};
NondegeneracyReport nondegeneracy(const ConvolutedSemigroup& S, const std::vector<TestFunction>& battery,
                                  double threshold = 1e-8);

// exp(f(u)) / (exp(f(u)) + exp(f(1-u))), f(u) = -1/u: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

}  // namespace udsg
