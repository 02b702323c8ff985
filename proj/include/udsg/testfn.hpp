// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "udsg/numerics.hpp"
#include "udsg/weights.hpp"

namespace udsg {

struct Window {
  double w0 = 0.0;
  double w1 = 0.0;
};

// Samples f(t_j), t_j = w0 + j dt, j < n, on a periodic window, with the
// forward DFT cached at construction.
class TestFunction {
 public:
  TestFunction() = default;
  TestFunction(double w0, double dt, std::vector<cplx> values, double alpha, double beta);
  // From a spectrum; values are its inverse DFT and the spectrum is kept as given.
  static TestFunction from_spectrum(double w0, double dt, std::vector<cplx> spectrum, double alpha, double beta);

  double w0() const { return w0_; }
  double w1() const { return w0_ + dt_ * double(values_.size()); }
  double dt() const { return dt_; }
  std::size_t n() const { return values_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double t(std::size_t j) const { return w0_ + dt_ * double(j); }
  const std::vector<cplx>& values() const { return values_; }
  const std::vector<cplx>& spectrum() const { return spectrum_; }
  // Angular frequency of DFT bin k, in (-pi/dt, pi/dt].
  double xi(std::size_t k) const;

  // Trigonometric interpolant inside the window, zero outside it.
  cplx at(double t) const;
  double max_abs() const;
  // max |F_k| over the top eighth of frequencies relative to max |F_k|.
  double spectral_tail() const;
  // Riemann sum over the window (spectrally accurate for periodic data).
  cplx integral() const;

  std::vector<std::string> warnings;

  void write_csv(const std::string& path) const;

 private:
  double w0_ = 0.0, dt_ = 1.0;
  double alpha_ = 0.0, beta_ = 0.0;
  std::vector<cplx> values_;
  std::vector<cplx> spectrum_;
};

// exp(-(1-u^2)^{-1/(s-1)}) for |u| < 1, zero otherwise.
double bump_profile(double s, double u);

// Bump on [alpha, beta] normalized to max 1. The default window is twice the
// support length, centered on it.
TestFunction gevrey_bump(double s, double alpha, double beta, std::size_t n);
TestFunction gevrey_bump(double s, double alpha, double beta, std::size_t n, Window w);

// Smooth monotone ramp: 0 left of -s0, 1 right of 0.
TestFunction ramp_cutoff(double s, double s0, std::size_t n, Window w);

// Samples fn on the grid of `like`, with the given support.
TestFunction sample_like(const TestFunction& like, const std::function<cplx(double)>& fn, double alpha, double beta);
TestFunction sample(Window w, std::size_t n, const std::function<cplx(double)>& fn, double alpha, double beta);

TestFunction scale(const TestFunction& f, cplx a);
TestFunction add(const TestFunction& f, const TestFunction& g, cplx a = 1.0, cplx b = 1.0);
TestFunction multiply(const TestFunction& f, const TestFunction& g);

// Trigonometric resampling onto a new grid.
TestFunction resample(const TestFunction& f, double w0, double dt, std::size_t n);

// Convolution via zero-padded FFT. With causal = true the inputs are first
// restricted to t >= 0 (the *_0 convolution); otherwise the full line.
TestFunction convolve(const TestFunction& f, const TestFunction& g, bool causal);
TestFunction convolve0(const TestFunction& f, const TestFunction& g);

// Spectral derivative: multiply by (i xi)^p. Warns past the reliable order.
TestFunction derivative(const TestFunction& f, int p);
// Largest p for which the amplified spectral tail stays below 1e-6.
int reliable_order(const TestFunction& f, int pcap = 64);

// sup over p <= pmax and resolved frequencies of
// h^p |(d/dxi)^p hat f(xi)| e^{M(h|xi|)} / M_p, with hat f(xi) = int f e^{-i xi t} dt.
double seminorm(const TestFunction& f, const WeightSequence& W, double h, int pmax);

}  // namespace udsg
