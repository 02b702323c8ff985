// SPDX-License-Identifier: Apache-2.0
// Closed-form and brute-force references shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "udsg/testfn.hpp"
#include "udsg/weights.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Residue series from closing the contour to the left: K(t) = sum_q c_q e^{-mu_q |t|},
// mu_q = m_q / L, c_q = mu_q / (2 prod_{p != q} (1 - mu_q^2 / mu_p^2)).
struct Residues {
  std::vector<double> mu, c;
};

inline Residues residues(const udsg::WeightSequence& W, double L, int N, int qmax) {
  Residues r;
  for (int q = 1; q <= std::min(qmax, N); ++q) {
    double mq = W.ratio(q) / L, logabs = 0.0, sign = 1.0;
    for (int p = 1; p <= N; ++p) {
      if (p == q) continue;
      double mp = W.ratio(p) / L, f = 1.0 - (mq * mq) / (mp * mp);
      logabs += std::log(std::abs(f));
      if (f < 0) sign = -sign;
    }
    r.mu.push_back(mq);
    r.c.push_back(sign * mq / 2.0 * std::exp(-logabs));
  }
  return r;
}

inline double residue_K(const Residues& r, double t) {
  double acc = 0.0;
  for (std::size_t i = r.mu.size(); i-- > 0;) acc += r.c[i] * std::exp(-r.mu[i] * std::abs(t));
  return acc;
}

inline double residue_Theta(const Residues& r, double t) {
  double acc = 0.0;
  for (std::size_t i = r.mu.size(); i-- > 0;) acc += r.c[i] * (-std::expm1(-r.mu[i] * t)) / r.mu[i];
  return acc;
}

// int_0^t K(t-u) e^{mu u} du term by term.
inline cplx residue_conv(const Residues& r, cplx mu, double t) {
  cplx acc = 0.0;
  for (std::size_t i = r.mu.size(); i-- > 0;) {
    double m = r.mu[i];
    acc += r.c[i] * (std::exp(mu * t) - std::exp(-m * t)) / (mu + m);
  }
  return acc;
}

// Composite 16-point Gauss-Legendre on [a, b] with the given panel count.
inline cplx gauss(const std::function<cplx(double)>& f, double a, double b, int panels) {
  static const double x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                              0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static const double w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                              0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  cplx acc = 0.0;
  double hw = 0.5 * (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double c = a + (2 * p + 1) * hw;
    for (int k = 0; k < 8; ++k) acc += w[k] * (f(c - hw * x[k]) + f(c + hw * x[k]));
  }
  return acc * hw;
}

// Gevrey bump on (alpha, beta) with peak value 1, evaluated analytically.
struct Bump {
  double s, alpha, beta;
  double operator()(double t) const {
    double m = 0.5 * (alpha + beta), h = 0.5 * (beta - alpha);
    return udsg::bump_profile(s, (t - m) / h) / udsg::bump_profile(s, 0.0);
  }
};

// int_0^inf phi(t) e^{mu t} dt for a bump.
inline cplx bump_laplace(const Bump& b, cplx mu) {
  double lo = std::max(0.0, b.alpha);
  if (lo >= b.beta) return 0.0;
  return gauss([&](double t) { return b(t) * std::exp(mu * t); }, lo, b.beta, 64);
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

}  // namespace oracle
