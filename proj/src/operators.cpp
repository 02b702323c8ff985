// SPDX-License-Identifier: Apache-2.0
#include "udsg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "udsg/parallel.hpp"

namespace udsg {

Generator Generator::diagonal(std::vector<cplx> eigs) {
  if (eigs.empty()) throw std::invalid_argument("generator needs at least one eigenvalue");
  Generator g;
  g.diagonal_ = true;
  g.A_ = Matrix::Zero(Eigen::Index(eigs.size()), Eigen::Index(eigs.size()));
  for (std::size_t i = 0; i < eigs.size(); ++i) g.A_(Eigen::Index(i), Eigen::Index(i)) = eigs[i];
  g.spectrum_ = std::move(eigs);
  return g;
}

Generator Generator::dense(const Matrix& A) {
  if (A.rows() == 0 || A.rows() != A.cols()) throw std::invalid_argument("generator matrix must be square");
  Generator g;
  g.A_ = A;
  Eigen::ComplexEigenSolver<Matrix> es(A, false);
  for (Eigen::Index i = 0; i < A.rows(); ++i) g.spectrum_.push_back(es.eigenvalues()(i));
  return g;
}

Generator diagonal_generator(const std::vector<cplx>& eigs) { return Generator::diagonal(eigs); }

Matrix Generator::resolvent(cplx lambda) const {
  Eigen::Index n = A_.rows();
  if (diagonal_) {
    Matrix R = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) R(i, i) = 1.0 / (lambda - spectrum_[std::size_t(i)]);
    return R;
  }
  Matrix M = lambda * Matrix::Identity(n, n) - A_;
  return M.partialPivLu().solve(Matrix::Identity(n, n));
}

double operator_norm(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double Generator::resolvent_norm(cplx lambda) const { return operator_norm(resolvent(lambda)); }

double Generator::spectral_abscissa() const {
  double w = kNegInf;
  for (cplx m : spectrum_) w = std::max(w, m.real());
  return w;
}

double Generator::distance_to_spectrum(cplx lambda) const {
  double d = std::numeric_limits<double>::infinity();
  for (cplx m : spectrum_) d = std::min(d, std::abs(lambda - m));
  return d;
}

Matrix Generator::expm(double t) const {
  if (diagonal_) {
    Eigen::Index n = A_.rows();
    Matrix E = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) E(i, i) = std::exp(t * spectrum_[std::size_t(i)]);
    return E;
  }
  Matrix tA = t * A_;
  return tA.exp();
}

bool omega_contains(const WeightSequence& W, double k, double C, cplx lambda) {
  return lambda.real() >= assoc(W, k * std::abs(lambda)) + C;
}

namespace {

// x = M(k sqrt(x^2 + y^2)) + shift.
double fixed_point(const WeightSequence& W, double k, double shift, double y) {
  double x = shift;
  for (int it = 0; it < 100; ++it) {
    double nx = assoc(W, k * std::hypot(x, y)) + shift;
    if (std::abs(nx - x) <= 1e-13 * (1.0 + std::abs(x))) return nx;
    x = nx;
  }
  throw std::runtime_error("fixed-point iteration did not converge");
}

}  // namespace

double omega_boundary(const WeightSequence& W, double k, double C, double y) { return fixed_point(W, k, C, y); }

Generator curve_generator(const WeightSequence& W, double k, double C, int n, double y_step, double delta) {
  if (!(k > 0.0)) throw std::invalid_argument("curve generator needs k > 0");
  if (n < 1) throw std::invalid_argument("curve generator needs n >= 1");
  std::vector<cplx> eigs;
  for (int j = 1; j <= n; ++j) {
    double y = y_step * j;
    eigs.emplace_back(fixed_point(W, k, C - delta, y), y);
  }
  return Generator::diagonal(eigs);
}

std::vector<cplx> omega_samples(const WeightSequence& W, double k, double C, std::size_t count, double ymax,
                                double dmin, double dmax) {
  std::vector<cplx> out;
  for (std::size_t i = 1; out.size() < count; ++i) {
    double y = ymax * (2.0 * halton(i, 2) - 1.0);
    double off = dmin * std::pow(dmax / dmin, halton(i, 3));
    cplx lam(omega_boundary(W, k, C, y) + off, y);
    if (omega_contains(W, k, C, lam)) out.push_back(lam);
  }
  return out;
}

std::vector<cplx> halfplane_samples(double a, std::size_t count, double ymax, double dmin, double dmax) {
  std::vector<cplx> out;
  for (std::size_t i = 1; out.size() < count; ++i) {
    double y = ymax * (2.0 * halton(i, 2) - 1.0);
    double off = dmin * std::pow(dmax / dmin, halton(i, 3));
    out.emplace_back(a + off, y);
  }
  return out;
}

namespace {

FitReport fit(const Generator& G, const std::vector<cplx>& samples, const WeightSequence& W, const char* mode) {
  FitReport rep;
  rep.mode = mode;
  rep.samples = samples.size();
  rep.norms.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) { rep.norms[i] = G.resolvent_norm(samples[i]); });
  for (double v : rep.norms) rep.max_norm = std::max(rep.max_norm, v);
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(samples[a]) < std::abs(samples[b]); });
  std::vector<double> x, y;
  for (std::size_t i : order) {
    x.push_back(std::abs(samples[i]));
    y.push_back(std::log(rep.norms[i]));
  }
  auto r = fit_stable_rate(x, y, geometric_grid(0.05, 20.0, 1.02),
                           [&](double kp, double xi) { return assoc(W, kp * xi); });
  rep.found = r.found;
  rep.k_prime = r.rate;
  rep.log_C = r.log_constant;
  return rep;
}

}  // namespace

FitReport resolvent_bound_fit(const Generator& G, const std::vector<cplx>& samples, const WeightSequence& W, double k,
                              double C) {
  for (cplx s : samples)
    if (!omega_contains(W, k, C, s)) throw std::invalid_argument("sample outside the region");
  return fit(G, samples, W, "region");
}

FitReport resolvent_halfplane_fit(const Generator& G, const std::vector<cplx>& samples, const WeightSequence& W,
                                  double a) {
  for (cplx s : samples)
    if (!(s.real() > a)) throw std::invalid_argument("sample outside the half-plane");
  return fit(G, samples, W, "half-plane");
}

}  // namespace udsg
