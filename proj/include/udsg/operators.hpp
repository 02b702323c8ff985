// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "udsg/numerics.hpp"
#include "udsg/ultrapoly.hpp"
#include "udsg/weights.hpp"

namespace udsg {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Finite-dimensional generator A exposed through its resolvent.
class Generator {
 public:
  static Generator diagonal(std::vector<cplx> eigs);
  static Generator dense(const Matrix& A);

  std::size_t dim() const { return std::size_t(A_.rows()); }
  const Matrix& matrix() const { return A_; }
  const std::vector<cplx>& spectrum() const { return spectrum_; }
  bool is_diagonal() const { return diagonal_; }

  // (lambda I - A)^{-1}; exact entries 1/(lambda - mu_j) for diagonal A.
  Matrix resolvent(cplx lambda) const;
  // Largest singular value of the resolvent.
  double resolvent_norm(cplx lambda) const;
  double spectral_abscissa() const;
  double distance_to_spectrum(cplx lambda) const;
  // e^{tA}: eigenvalue exponentials for diagonal A, scaling and squaring otherwise.
  Matrix expm(double t) const;

 private:
  Matrix A_;
  std::vector<cplx> spectrum_;
  bool diagonal_ = false;
};

Generator diagonal_generator(const std::vector<cplx>& eigs);

// Spectral norm (largest singular value).
double operator_norm(const Matrix& M);

// Re lambda >= M(k |lambda|) + C.
bool omega_contains(const WeightSequence& W, double k, double C, cplx lambda);
// Real part of the boundary point of the region at height y.
double omega_boundary(const WeightSequence& W, double k, double C, double y);

// Eigenvalues x_j + i j y_step placed delta left of the region boundary,
// x_j = M(k |mu_j|) + C - delta by fixed-point iteration.
Generator curve_generator(const WeightSequence& W, double k, double C, int n, double y_step = 1.0,
                          double delta = 0.5);

// Halton samples inside the region: |Im| <= ymax, offsets from the boundary
// log-uniform in [dmin, dmax].
std::vector<cplx> omega_samples(const WeightSequence& W, double k, double C, std::size_t count, double ymax,
                                double dmin, double dmax);
// Halton samples in a <= Re lambda - offset, offset in [dmin, dmax], |Im| <= ymax.
std::vector<cplx> halfplane_samples(double a, std::size_t count, double ymax, double dmin, double dmax);

struct FitReport {
  std::string mode;  // "region" or "half-plane"
  bool found = false;
  double k_prime = 0.0;
  double log_C = 0.0;
  double max_norm = 0.0;
  std::size_t samples = 0;
  std::vector<double> norms;  // ||R(lambda_i)||, sample order
};

// sup_i ||R(lambda_i)|| e^{-M(k'|lambda_i|)} over a geometric k' grid; returns
// the smallest k' whose sup is attained away from the outer decile in |lambda|.
// Throws if a sample violates the mode's membership condition.
FitReport resolvent_bound_fit(const Generator& G, const std::vector<cplx>& samples, const WeightSequence& W, double k,
                              double C);
FitReport resolvent_halfplane_fit(const Generator& G, const std::vector<cplx>& samples, const WeightSequence& W,
                                  double a);

}  // namespace udsg
