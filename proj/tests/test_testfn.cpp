// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "udsg/testfn.hpp"

using namespace udsg;

namespace {

double bump_exact(double s, double a, double b, double t) {
  double u = (2.0 * t - a - b) / (b - a);
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - std::pow(1.0 - u * u, -1.0 / (s - 1.0)));
}

// Composite 8-point Gauss-Legendre on [a, b] with m panels.
template <class F>
double gauss(const F& f, double a, double b, int m) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  double h = (b - a) / m, acc = 0.0;
  for (int i = 0; i < m; ++i) {
    double c = a + (i + 0.5) * h, part = 0.0;
    for (int k = 0; k < 4; ++k) part += w[k] * (f(c - 0.5 * h * x[k]) + f(c + 0.5 * h * x[k]));
    acc += 0.5 * h * part;
  }
  return acc;
}

cplx value_near(const TestFunction& f, double t) {
  long k = std::lround((t - f.w0()) / f.dt());
  if (k < 0 || k >= long(f.n())) return 0.0;
  return f.values()[std::size_t(k)];
}

}  // namespace

TEST_CASE("bump values") {
  CHECK(bump_profile(2.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(bump_profile(2.0, 1.0) == 0.0);
  auto f = gevrey_bump(2.0, -1.0, 1.0, 1024);
  CHECK(f.w0() == -2.0);
  CHECK(f.w1() == 2.0);
  CHECK(f.values()[512].real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.max_abs() == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t j = 0; j < f.n(); ++j)
    if (f.t(j) <= -1.0 || f.t(j) >= 1.0) CHECK(f.values()[j] == cplx(0.0));
  CHECK_THROWS(gevrey_bump(1.0, 0.0, 1.0, 1024));
  CHECK_THROWS(gevrey_bump(2.0, 1.0, 0.0, 1024));
  CHECK_THROWS(gevrey_bump(2.0, 0.0, 1.0, 1000));
}

TEST_CASE("bump translation equivariance") {
  auto f = gevrey_bump(2.0, -1.0, 1.0, 1024);
  auto g = gevrey_bump(2.0, 0.0, 2.0, 1024);
  for (std::size_t j = 0; j < f.n(); ++j) CHECK(std::abs(f.values()[j] - g.values()[j]) <= 1e-15);
}

TEST_CASE("spectral round trip") {
  auto f = gevrey_bump(2.0, 0.1, 0.9, 4096);
  std::vector<cplx> back = f.spectrum();
  dft(back, +1);
  for (std::size_t j = 0; j < f.n(); ++j) CHECK(std::abs(back[j] / double(f.n()) - f.values()[j]) <= 1e-12);
  MESSAGE("spectral tail of the (0.1, 0.9) bump on 4096 points: " << f.spectral_tail());
  CHECK(f.spectral_tail() < 1e-12);
  CHECK(std::abs(f.at(0.5) - 1.0) < 1e-12);
  CHECK(std::abs(f.at(0.3) - bump_exact(2.0, 0.1, 0.9, 0.3)) < 1e-12);
  auto far = gevrey_bump(2.0, 1.0, 1.9, 256);
  CHECK(far.w0() > 0.0);
  CHECK(far.at(0.0) == cplx(0.0));
  CHECK(far.at(far.w1()) == cplx(0.0));
}

TEST_CASE("ramp cutoff") {
  double s0 = 1.0;
  auto g = ramp_cutoff(2.0, s0, 4096, {-2.0, 2.0});
  auto at = [&](double t) { return value_near(g, t).real(); };
  CHECK(at(-s0) == 0.0);
  CHECK(at(0.0) == 1.0);
  CHECK(at(1.5) == 1.0);
  CHECK(at(-1.5) == 0.0);
  // Symmetric bump: the ramp passes 1/2 at the midpoint.
  CHECK(at(-0.5) == doctest::Approx(0.5).epsilon(1e-12));
  double telescoped = 0.0;
  for (std::size_t j = 1; j < g.n(); ++j) {
    CHECK(g.values()[j].real() >= g.values()[j - 1].real());
    telescoped += g.values()[j].real() - g.values()[j - 1].real();
  }
  CHECK(std::abs(telescoped - 1.0) < 1e-12);
  // Interior values against an independent quadrature of the bump.
  double total = gauss([](double t) { return bump_profile(2.0, 2.0 * t + 1.0); }, -1.0, 0.0, 400);
  for (double t0 : {-0.9, -0.7, -0.25, -0.05}) {
    double t = g.t(std::size_t(std::lround((t0 - g.w0()) / g.dt())));
    double part = gauss([](double u) { return bump_profile(2.0, 2.0 * u + 1.0); }, -1.0, t, 400);
    CHECK(at(t) == doctest::Approx(part / total).epsilon(1e-12));
  }
  CHECK_THROWS(ramp_cutoff(2.0, 0.0, 4096, {-2.0, 2.0}));
  CHECK_THROWS(ramp_cutoff(2.0, 3.0, 4096, {-2.0, 2.0}));
}

TEST_CASE("convolution support and Fubini") {
  auto f = gevrey_bump(2.0, 1.0, 2.0, 2048);
  auto g = gevrey_bump(2.0, 1.0, 2.0, 2048);
  auto c = convolve0(f, g);
  CHECK(c.alpha() == 2.0);
  CHECK(c.beta() == 4.0);
  for (std::size_t j = 0; j < c.n(); ++j)
    if (c.t(j) < 2.0 - c.dt() || c.t(j) > 4.0 + c.dt()) CHECK(c.values()[j] == cplx(0.0));
  double If = gauss([](double t) { return bump_exact(2.0, 1.0, 2.0, t); }, 1.0, 2.0, 200);
  CHECK(std::abs(c.integral().real() - If * If) < 1e-8);

  auto z = scale(g, 0.0);
  auto cz = convolve0(f, z);
  CHECK(cz.max_abs() == 0.0);
}

TEST_CASE("convolution values against direct quadrature") {
  auto f = gevrey_bump(2.0, 0.1, 0.5, 2048);
  auto g = gevrey_bump(2.0, 0.2, 0.9, 2048, {-0.5, 1.5});
  auto g2 = gevrey_bump(2.0, 0.2, 0.9, 4096, {-0.5, 1.5});
  auto c = convolve0(f, g2);  // g2 resampled onto the spacing of f when they differ
  auto c_same = convolve0(f, gevrey_bump(2.0, 0.2, 0.9, 2048, {-0.5, 1.2}));
  (void)g;
  for (double t : {0.4, 0.7, 1.0, 1.3}) {
    double oracle = gauss([&](double s) { return bump_exact(2.0, 0.1, 0.5, t - s) * bump_exact(2.0, 0.2, 0.9, s); }, 0.0, t, 400);
    CHECK(std::abs(c_same.at(t).real() - oracle) < 1e-9);
    CHECK(std::abs(c.at(t).real() - oracle) < 1e-8);
  }
}

TEST_CASE("convolution algebra on functions supported in (0, inf)") {
  auto f = gevrey_bump(2.0, 0.1, 0.4, 2048, {-0.5, 1.5});
  auto g = gevrey_bump(2.0, 0.2, 0.6, 2048, {-0.5, 1.5});
  auto h = gevrey_bump(2.0, 0.15, 0.3, 2048, {-0.5, 1.5});
  auto fg = convolve0(f, g), gf = convolve0(g, f);
  for (std::size_t j = 0; j < fg.n(); ++j) CHECK(std::abs(fg.values()[j] - value_near(gf, fg.t(j))) <= 1e-10);
  auto full = convolve(f, g, false);
  for (std::size_t j = 0; j < fg.n(); ++j) CHECK(std::abs(fg.values()[j] - value_near(full, fg.t(j))) <= 1e-14);
  auto left = convolve0(fg, h), right = convolve0(f, convolve0(g, h));
  for (std::size_t j = 0; j < left.n(); ++j) CHECK(std::abs(left.values()[j] - value_near(right, left.t(j))) <= 1e-8);
  CHECK(fg.alpha() == doctest::Approx(0.3));
  CHECK(fg.beta() == doctest::Approx(1.0));
}

TEST_CASE("spectral derivatives") {
  auto f = gevrey_bump(2.0, 0.1, 0.9, 4096);
  auto d0 = derivative(f, 0);
  for (std::size_t j = 0; j < f.n(); ++j) CHECK(d0.values()[j] == f.values()[j]);
  auto d1 = derivative(f, 1);
  CHECK(std::abs(d1.integral()) <= 1e-10);
  auto d11 = derivative(d1, 1), d2 = derivative(f, 2);
  double scale2 = d2.max_abs();
  for (std::size_t j = 0; j < f.n(); ++j) CHECK(std::abs(d11.values()[j] - d2.values()[j]) <= 1e-9 * scale2);
  // Analytic derivative of exp(1 - 1/(1-u^2)), u = (t - 0.5) / 0.4.
  double scale1 = d1.max_abs();
  for (std::size_t j = 0; j < f.n(); ++j) {
    double t = f.t(j), u = (t - 0.5) / 0.4;
    double exact = std::abs(u) < 1.0 ? bump_exact(2.0, 0.1, 0.9, t) * (-2.0 * u / std::pow(1.0 - u * u, 2)) / 0.4 : 0.0;
    CHECK(std::abs(d1.values()[j].real() - exact) <= 1e-9 * scale1);
  }
  CHECK(d1.warnings.empty());
  int pstar = reliable_order(f);
  MESSAGE("reliable derivative order: " << pstar);
  // Roundoff at the Nyquist band, amplified by xi^p, limits the order on fine grids.
  CHECK(pstar >= 2);
  auto dhi = derivative(f, pstar + 1);
  CHECK_FALSE(dhi.warnings.empty());
  CHECK_THROWS(derivative(f, -1));
}

TEST_CASE("seminorm surrogate") {
  auto W = make_gevrey(2.0, 50);
  auto f = gevrey_bump(2.0, -1.0, 1.0, 1024);
  CHECK(seminorm(scale(f, 0.0), W, 0.1, 10) == 0.0);
  double a = seminorm(f, W, 0.1, 10), b = seminorm(scale(f, 2.0), W, 0.1, 10);
  CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-13));

  auto W3 = make_gevrey(3.0, 50);
  double s3 = seminorm(gevrey_bump(3.0, -1.0, 1.0, 1024), W3, 0.5, 12);
  CHECK(std::isfinite(s3));
  CHECK(s3 > 0.0);

  auto gb = [](std::size_t n) {
    auto bump = gevrey_bump(2.0, -1.0, 1.0, n);
    auto gauss_fn = sample_like(bump, [](double t) { return cplx(std::exp(-4.0 * t * t)); }, -2.0, 2.0);
    return multiply(bump, gauss_fn);
  };
  double coarse = seminorm(gb(1024), W, 0.1, 10), fine = seminorm(gb(2048), W, 0.1, 10);
  MESSAGE("seminorm " << coarse << " -> " << fine);
  CHECK(std::isfinite(fine));
  CHECK(fine == doctest::Approx(coarse).epsilon(0.05));
}
