// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace udsg {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Pairwise (cascade) summation. The tree shape depends only on the length.
template <class T, class Get>
T pairwise_sum(std::size_t lo, std::size_t hi, const Get& get) {
  if (hi - lo <= 8) {
    T acc = get(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) acc = acc + get(i);
    return acc;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum<T>(lo, mid, get) + pairwise_sum<T>(mid, hi, get);
}

double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

// Number with sign and log-magnitude, for sums whose terms under- or overflow.
struct SignedLog {
  double sign = 0.0;  // -1, 0, +1
  double log_abs = kNegInf;
  static SignedLog from(double x);
  double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log_abs); }
};
SignedLog signed_log_add(const SignedLog& a, const SignedLog& b);

std::size_t next_pow2(std::size_t n);
bool is_pow2(std::size_t n);

// Quadrature weights on n+1 uniform points with spacing h: trapezoid with
// Gregory end corrections through difference order min(6, n/2).
std::vector<double> gregory_weights(std::size_t npoints, double h);

// Cumulative integral from the first sample, fourth order: composite Simpson
// at even indices, Simpson plus the 3/8 rule at odd indices, and a cubic
// formula on the first interval.
template <class T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h) {
  std::size_t n = f.size();
  std::vector<T> out(n, T{});
  if (n < 2) return out;
  if (n < 4) {
    for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + (f[i - 1] + f[i]) * (0.5 * h);
    return out;
  }
  std::vector<T> even(n, T{});
  for (std::size_t i = 2; i < n; i += 2)
    even[i] = even[i - 2] + (f[i - 2] + 4.0 * f[i - 1] + f[i]) * (h / 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = even[i];
    } else if (i == 1) {
      out[i] = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) * (h / 24.0);
    } else {
      out[i] = even[i - 3] + (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]) * (3.0 * h / 8.0);
    }
  }
  return out;
}

// In-place unnormalized DFT: sign -1 gives sum_j x_j e^{-2 pi i jk/n}.
void dft(std::vector<cplx>& x, int sign);

// Radical-inverse (Halton) coordinate of index i >= 1 in the given prime base.
double halton(std::size_t i, unsigned base);

// log C(n, k) via lgamma.
double log_binomial(double n, double k);

}  // namespace udsg
