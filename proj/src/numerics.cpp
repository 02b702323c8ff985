// SPDX-License-Identifier: Apache-2.0
#include "udsg/numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace udsg {

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return pairwise_sum<double>(0, v.size(), [&](std::size_t i) { return v[i]; });
}

cplx pairwise_sum(std::span<const cplx> v) {
  if (v.empty()) return 0.0;
  return pairwise_sum<cplx>(0, v.size(), [&](std::size_t i) { return v[i]; });
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

SignedLog SignedLog::from(double x) {
  if (x == 0.0) return {};
  return {x > 0 ? 1.0 : -1.0, std::log(std::abs(x))};
}

SignedLog signed_log_add(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0.0) return b;
  if (b.sign == 0.0) return a;
  const SignedLog& big = a.log_abs >= b.log_abs ? a : b;
  const SignedLog& small = a.log_abs >= b.log_abs ? b : a;
  double r = std::exp(small.log_abs - big.log_abs);
  if (big.sign == small.sign) return {big.sign, big.log_abs + std::log1p(r)};
  if (r == 1.0) return {};
  return {big.sign, big.log_abs + std::log1p(-r)};
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> gregory_weights(std::size_t npoints, double h) {
  if (npoints < 2) return std::vector<double>(npoints, 0.0);
  std::size_t n = npoints - 1;
  std::vector<double> w(npoints, h);
  w.front() = w.back() = 0.5 * h;
  static const double G[] = {1.0 / 12, 1.0 / 24, 19.0 / 720, 3.0 / 160, 863.0 / 60480, 275.0 / 24192};
  std::size_t order = std::min<std::size_t>(6, n / 2);
  for (std::size_t k = 1; k <= order; ++k) {
    double c = 1.0;  // C(k, i)
    for (std::size_t i = 0; i <= k; ++i) {
      double sgn = (i % 2 == 0) ? 1.0 : -1.0;
      double d = h * G[k - 1] * sgn * c;
      w[i] -= d;
      w[n - i] -= d;
      c = c * double(k - i) / double(i + 1);
    }
  }
  return w;
}

namespace {
std::mutex g_plan_mu;
}

void dft(std::vector<cplx>& x, int sign) {
  if (x.empty()) return;
  auto* data = reinterpret_cast<fftw_complex*>(x.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_plan_mu);
    plan = fftw_plan_dft_1d(int(x.size()), data, data, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(g_plan_mu);
  fftw_destroy_plan(plan);
}

double halton(std::size_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace udsg
