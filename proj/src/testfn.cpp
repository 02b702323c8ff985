// SPDX-License-Identifier: Apache-2.0
#include "udsg/testfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace udsg {

TestFunction::TestFunction(double w0, double dt, std::vector<cplx> values, double alpha, double beta)
    : w0_(w0), dt_(dt), alpha_(alpha), beta_(beta), values_(std::move(values)) {
  if (!(dt > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (values_.empty()) throw std::invalid_argument("empty sample vector");
  spectrum_ = values_;
  dft(spectrum_, -1);
}

TestFunction TestFunction::from_spectrum(double w0, double dt, std::vector<cplx> spectrum, double alpha, double beta) {
  if (!(dt > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (spectrum.empty()) throw std::invalid_argument("empty spectrum");
  TestFunction f;
  f.w0_ = w0;
  f.dt_ = dt;
  f.alpha_ = alpha;
  f.beta_ = beta;
  f.values_ = spectrum;
  dft(f.values_, +1);
  for (auto& x : f.values_) x /= double(spectrum.size());
  f.spectrum_ = std::move(spectrum);
  return f;
}

double TestFunction::xi(std::size_t k) const {
  std::size_t n = values_.size();
  double kk = k <= n / 2 ? double(k) : double(k) - double(n);
  return 2.0 * kPi * kk / (double(n) * dt_);
}

cplx TestFunction::at(double t) const {
  std::size_t n = values_.size();
  if (t < w0_ || t >= w1()) return 0.0;
  double x = t - w0_;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (n % 2 == 0 && k == n / 2) {
      acc += spectrum_[k] * std::cos(xi(k) * x);
    } else {
      double ph = xi(k) * x;
      acc += spectrum_[k] * cplx(std::cos(ph), std::sin(ph));
    }
  }
  return acc / double(n);
}

double TestFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double TestFunction::spectral_tail() const {
  std::size_t n = values_.size();
  double mx = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double a = std::abs(spectrum_[k]);
    mx = std::max(mx, a);
    double kk = k <= n / 2 ? double(k) : double(n - k);
    if (kk > 3.0 * double(n) / 8.0) tail = std::max(tail, a);
  }
  return mx > 0.0 ? tail / mx : 0.0;
}

cplx TestFunction::integral() const { return pairwise_sum(values_) * dt_; }

void TestFunction::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "t,re,im\n";
  for (std::size_t j = 0; j < values_.size(); ++j) out << t(j) << ',' << values_[j].real() << ',' << values_[j].imag() << '\n';
}

double bump_profile(double s, double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(-std::pow(1.0 - u * u, -1.0 / (s - 1.0)));
}

TestFunction sample(Window w, std::size_t n, const std::function<cplx(double)>& fn, double alpha, double beta) {
  if (!(w.w1 > w.w0)) throw std::invalid_argument("empty window");
  double dt = (w.w1 - w.w0) / double(n);
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = fn(w.w0 + dt * double(j));
  return TestFunction(w.w0, dt, std::move(v), alpha, beta);
}

TestFunction sample_like(const TestFunction& like, const std::function<cplx(double)>& fn, double alpha, double beta) {
  return sample({like.w0(), like.w1()}, like.n(), fn, alpha, beta);
}

TestFunction gevrey_bump(double s, double alpha, double beta, std::size_t n, Window w) {
  if (!(s > 1.0)) throw std::invalid_argument("bump index must exceed 1");
  if (!(alpha < beta)) throw std::invalid_argument("bump support must satisfy alpha < beta");
  if (n < 256 || !is_pow2(n)) throw std::invalid_argument("grid size must be a power of two >= 256");
  if (alpha < w.w0 || beta > w.w1) throw std::invalid_argument("window must contain the support");
  double mid = 0.5 * (alpha + beta), half = 0.5 * (beta - alpha);
  return sample(
      w, n,
      [&](double t) {
        double u = (t - mid) / half;
        if (!(std::abs(u) < 1.0)) return cplx(0.0);
        return cplx(std::exp(1.0 - std::pow(1.0 - u * u, -1.0 / (s - 1.0))));
      },
      alpha, beta);
}

TestFunction gevrey_bump(double s, double alpha, double beta, std::size_t n) {
  double mid = 0.5 * (alpha + beta), len = beta - alpha;
  return gevrey_bump(s, alpha, beta, n, {mid - len, mid + len});
}

TestFunction ramp_cutoff(double s, double s0, std::size_t n, Window w) {
  if (!(s0 > 0.0)) throw std::invalid_argument("ramp length must be positive");
  if (!(s > 1.0)) throw std::invalid_argument("ramp index must exceed 1");
  double dt = (w.w1 - w.w0) / double(n);
  if (w.w0 > -s0 - 2.0 * dt || w.w1 < 2.0 * dt) throw std::invalid_argument("window must contain [-s0, 0] with margin");
  // Cell integrals of the bump on [-s0, 0] by 8-point Gauss-Legendre, then a
  // compensated prefix sum: monotone by construction.
  static const std::array<double, 4> gx{0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const std::array<double, 4> gw{0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  auto b = [&](double t) { return bump_profile(s, (2.0 * t + s0) / s0); };
  std::vector<double> cum(n, 0.0);
  double acc = 0.0, comp = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    double a = w.w0 + dt * double(j - 1), c = a + 0.5 * dt, cell = 0.0;
    if (a + dt > -s0 && a < 0.0)
      for (int i = 0; i < 4; ++i) cell += gw[i] * (b(c - 0.5 * dt * gx[i]) + b(c + 0.5 * dt * gx[i]));
    cell *= 0.5 * dt;
    double y = cell - comp, tsum = acc + y;
    comp = (tsum - acc) - y;
    acc = tsum;
    cum[j] = acc;
  }
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    double t = w.w0 + dt * double(j);
    v[j] = t <= -s0 ? 0.0 : (t >= 0.0 ? 1.0 : std::min(1.0, cum[j] / acc));
  }
  return TestFunction(w.w0, dt, std::move(v), -s0, w.w1);
}

TestFunction scale(const TestFunction& f, cplx a) {
  std::vector<cplx> v = f.values();
  for (auto& x : v) x *= a;
  return TestFunction(f.w0(), f.dt(), std::move(v), f.alpha(), f.beta());
}

namespace {

void require_same_grid(const TestFunction& f, const TestFunction& g) {
  if (f.n() != g.n() || std::abs(f.dt() - g.dt()) > 1e-12 * f.dt() || std::abs(f.w0() - g.w0()) > 1e-12 * f.dt() * double(f.n()))
    throw std::invalid_argument("pointwise operations need identical grids");
}

}  // namespace

TestFunction add(const TestFunction& f, const TestFunction& g, cplx a, cplx b) {
  require_same_grid(f, g);
  std::vector<cplx> v(f.n());
  for (std::size_t j = 0; j < f.n(); ++j) v[j] = a * f.values()[j] + b * g.values()[j];
  return TestFunction(f.w0(), f.dt(), std::move(v), std::min(f.alpha(), g.alpha()), std::max(f.beta(), g.beta()));
}

TestFunction multiply(const TestFunction& f, const TestFunction& g) {
  require_same_grid(f, g);
  std::vector<cplx> v(f.n());
  for (std::size_t j = 0; j < f.n(); ++j) v[j] = f.values()[j] * g.values()[j];
  double a = std::max(f.alpha(), g.alpha()), b = std::min(f.beta(), g.beta());
  return TestFunction(f.w0(), f.dt(), std::move(v), a, std::max(a, b));
}

TestFunction resample(const TestFunction& f, double w0, double dt, std::size_t n) {
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    double t = w0 + dt * double(j);
    v[j] = (t < f.alpha() || t > f.beta()) ? cplx(0.0) : f.at(t);
  }
  TestFunction out(w0, dt, std::move(v), f.alpha(), f.beta());
  if (f.spectral_tail() > 1e-12) out.warnings.push_back("resampled function is not spectrally resolved");
  return out;
}

TestFunction convolve(const TestFunction& f, const TestFunction& g0, bool causal) {
  TestFunction g = g0;
  if (std::abs(f.dt() - g0.dt()) > 1e-12 * f.dt()) {
    std::size_t m = next_pow2(std::size_t(std::ceil(double(g0.n()) * g0.dt() / f.dt())));
    g = resample(g0, g0.w0(), f.dt(), m);
    if (!g.warnings.empty()) throw std::invalid_argument("grid spacings differ and resampling is unresolved");
  }
  double dt = f.dt();
  std::size_t N = next_pow2(f.n() + g.n());
  std::vector<cplx> a(N, 0.0), b(N, 0.0);
  for (std::size_t j = 0; j < f.n(); ++j)
    if (!causal || f.t(j) >= 0.0) a[j] = f.values()[j];
  for (std::size_t j = 0; j < g.n(); ++j)
    if (!causal || g.t(j) >= 0.0) b[j] = g.values()[j];
  dft(a, -1);
  dft(b, -1);
  for (std::size_t k = 0; k < N; ++k) a[k] *= b[k];
  dft(a, +1);
  double fa = causal ? std::max(f.alpha(), 0.0) : f.alpha();
  double ga = causal ? std::max(g.alpha(), 0.0) : g.alpha();
  double lo = fa + ga, hi = f.beta() + g.beta();
  double w0 = f.w0() + g.w0();
  for (std::size_t m = 0; m < N; ++m) {
    double t = w0 + dt * double(m);
    a[m] = (t < lo || t > hi) ? cplx(0.0) : a[m] * (dt / double(N));
  }
  return TestFunction(w0, dt, std::move(a), lo, std::max(lo, hi));
}

TestFunction convolve0(const TestFunction& f, const TestFunction& g) { return convolve(f, g, true); }

int reliable_order(const TestFunction& f, int pcap) {
  std::size_t n = f.n();
  const auto& F = f.spectrum();
  for (int p = 0; p <= pcap; ++p) {
    double mx = kNegInf, tail = kNegInf;
    for (std::size_t k = 1; k < n; ++k) {
      double a = std::abs(F[k]);
      if (a == 0.0) continue;
      double v = std::log(a) + p * std::log(std::abs(f.xi(k)));
      mx = std::max(mx, v);
      double kk = k <= n / 2 ? double(k) : double(n - k);
      if (kk > 3.0 * double(n) / 8.0) tail = std::max(tail, v);
    }
    if (p == 0) mx = std::max(mx, std::log(std::abs(F[0]) + 1e-300));
    if (tail - mx > std::log(1e-6)) return p - 1;
  }
  return pcap;
}

TestFunction derivative(const TestFunction& f, int p) {
  if (p < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (p == 0) return f;
  std::size_t n = f.n();
  std::vector<cplx> F = f.spectrum();
  for (std::size_t k = 0; k < n; ++k) {
    if (n % 2 == 0 && k == n / 2 && p % 2 == 1) {
      F[k] = 0.0;
      continue;
    }
    F[k] *= std::pow(cplx(0.0, f.xi(k)), p);
  }
  dft(F, +1);
  for (auto& x : F) x /= double(n);
  TestFunction out(f.w0(), f.dt(), std::move(F), f.alpha(), f.beta());
  out.warnings = f.warnings;
  if (p > reliable_order(f)) out.warnings.push_back("derivative order " + std::to_string(p) + " exceeds the reliable order");
  return out;
}

double seminorm(const TestFunction& f, const WeightSequence& W, double h, int pmax) {
  if (pmax > W.pmax && !W.gevrey_index) throw std::invalid_argument("pmax beyond the weight table");
  std::size_t n = f.n();
  double best = kNegInf;
  for (int p = 0; p <= pmax; ++p) {
    std::vector<cplx> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = std::pow(cplx(0.0, -f.t(j)), p) * f.values()[j];
    dft(g, -1);
    double mx = 0.0;
    for (const auto& x : g) mx = std::max(mx, std::abs(x));
    if (mx == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      double a = std::abs(g[k]);
      if (a < 1e-13 * mx) continue;
      double v = p * std::log(h) + std::log(a * f.dt()) + assoc(W, h * std::abs(f.xi(k))) - W.log_weight(p);
      best = std::max(best, v);
    }
  }
  return best == kNegInf ? 0.0 : std::exp(best);
}

}  // namespace udsg
