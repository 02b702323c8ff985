// SPDX-License-Identifier: Apache-2.0
#include "udsg/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "udsg/parallel.hpp"

namespace udsg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const double kGaussX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                           0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
const double kGaussW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                           0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double smallest_zero(const Ultrapolynomial& P) {
  const auto& c = P.factor_coeffs();
  if (c.empty()) return kInf;
  return 1.0 / std::sqrt(*std::max_element(c.begin(), c.end()));
}

// |1/P(y - i abar)| and |d/dy log P| at y.
std::pair<double, double> line_modulus(const Ultrapolynomial& P, double abar, double y) {
  cplx zeta(y, -abar), z2 = zeta * zeta, D = 0.0;
  for (double c : P.factor_coeffs()) D += 2.0 * c * zeta / (1.0 + c * z2);
  return {std::exp(-P.eval(zeta).log_value.real()), std::abs(D)};
}

// (|G(T)| + int_T^inf |G'|) with G = 1/P on the line, by a geometric sweep.
double oscillatory_tail(const Ultrapolynomial& P, double abar, double T) {
  auto [g0, d0] = line_modulus(P, abar, T);
  (void)d0;
  double acc = 0.0, y = T;
  double gy = g0;
  for (int k = 0; k < 2000 && y < 1e7 * T; ++k) {
    auto [g, d] = line_modulus(P, abar, y);
    double y1 = y * 1.02;
    acc += g * d * (y1 - y);
    y = y1;
    gy = g;
  }
  return g0 + acc + gy;
}

bool is_uniform(const std::vector<double>& t) {
  if (t.size() < 3) return false;
  double dt = (t.back() - t.front()) / double(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - (t.front() + dt * double(i))) > 1e-12 * (1.0 + std::abs(t[i]))) return false;
  return true;
}

}  // namespace

const char* rule_name(Rule r) { return r == Rule::trapezoid ? "trapezoid" : "gauss-composite"; }

Rule parse_rule(const std::string& s) {
  if (s == "trapezoid") return Rule::trapezoid;
  if (s == "gauss-composite") return Rule::gauss_composite;
  throw std::invalid_argument("unknown quadrature rule '" + s + "'");
}

double absolute_tail(const Ultrapolynomial& P, double T) {
  const auto& c = P.factor_coeffs();
  double s = 0.0;
  int q = 0;
  for (double cp : c) {
    double v = std::log(cp * T * T);
    if (v <= 0.0) break;
    s += v;
    ++q;
  }
  if (q == 0) return kInf;
  return 2.0 * T / (2.0 * q - 1.0) * std::exp(-s);
}

BromwichLine design_line(const Ultrapolynomial& P, const LineDesign& d) {
  if (P.N() < 1) throw std::invalid_argument("kernel needs at least one factor");
  if (!(d.abar > 0.0)) throw std::invalid_argument("line abscissa must be positive");
  if (!(P.L() * d.abar < 1.0)) throw std::invalid_argument("L * abar must be < 1");
  if (!(d.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  double mu1 = smallest_zero(P);
  double left = std::max(d.omega, -mu1);
  if (!(d.abar < mu1)) throw std::invalid_argument("line passes right of the first zero of P(-i lambda)");
  if (!(d.abar > left)) throw std::invalid_argument("line must lie right of the spectrum");
  double dp = 0.75 * (mu1 - d.abar), dm = 0.75 * (d.abar - left);
  double lt = std::log(1.0 / d.tol), c0 = 5.0 + std::log(std::max(1.0, d.rnorm));
  double h = std::min(2.0 * kPi * dp / (lt + dp * d.t_max + c0),
                      2.0 * kPi * dm / (lt + dm * std::max(0.0, -d.t_lo) + c0));

  BromwichLine line;
  line.abar = d.abar;
  line.rule = d.rule;
  line.tol = d.tol;
  double pre = std::exp(d.abar * std::max(0.0, d.t_max)) * d.rnorm / (2.0 * kPi);
  double T = std::max(d.abar, 1.0);
  for (; T < 1e5; T *= 1.05) {
    double b = pre * absolute_tail(P, T);
    if (b <= 0.5 * d.tol) {
      line.certificate = b;
      break;
    }
  }
  if (T >= 1e5) {
    if (!(d.t_min > 0.0)) throw std::invalid_argument("truncation certificate needs t_min > 0");
    double lo = std::max(d.abar, 1.0);
    for (T = lo; T < 1e8; T *= 1.05) {
      double b = pre * 2.0 * oscillatory_tail(P, d.abar, T) / d.t_min;
      if (b <= 0.5 * d.tol) {
        line.certificate = b;
        break;
      }
    }
    if (T >= 1e8) throw std::runtime_error("no truncation height meets the tolerance");
    line.oscillatory = true;
    line.t_min = d.t_min;
  }
  line.height = T;
  if (d.rule == Rule::trapezoid) {
    line.nodes = std::size_t(std::ceil(2.0 * T / h)) + 1;
    line.spacing = 2.0 * T / double(line.nodes - 1);
  } else {
    double H = 4.0 * h;
    std::size_t panels = std::size_t(std::ceil(2.0 * T / H));
    line.spacing = 2.0 * T / double(panels);
    line.nodes = 8 * panels;
  }
  return line;
}

BromwichLine refine(const BromwichLine& line) {
  BromwichLine r = line;
  r.height = 2.0 * line.height;
  r.spacing = 0.5 * line.spacing;
  if (r.rule == Rule::trapezoid) {
    r.nodes = std::size_t(std::llround(2.0 * r.height / r.spacing)) + 1;
  } else {
    r.nodes = 8 * std::size_t(std::llround(2.0 * r.height / r.spacing));
  }
  return r;
}

LineNodes line_nodes(const BromwichLine& line) {
  LineNodes out;
  double T = line.height;
  if (line.rule == Rule::trapezoid) {
    std::size_t n = line.nodes;
    out.lambda.resize(n);
    out.weight.assign(n, line.spacing);
    for (std::size_t j = 0; j < n; ++j) out.lambda[j] = cplx(line.abar, -T + line.spacing * double(j));
    out.weight.front() *= 0.5;
    out.weight.back() *= 0.5;
  } else {
    std::size_t panels = line.nodes / 8;
    for (std::size_t p = 0; p < panels; ++p) {
      double c = -T + line.spacing * (double(p) + 0.5);
      for (int k = 0; k < 8; ++k) {
        out.lambda.emplace_back(line.abar, c + 0.5 * line.spacing * kGaussX[k]);
        out.weight.push_back(0.5 * line.spacing * kGaussW[k]);
      }
    }
  }
  return out;
}

std::vector<cplx> contour_sum(const LineNodes& nodes, const std::vector<cplx>& coef, std::size_t m,
                              const std::vector<double>& tgrid) {
  const std::size_t nn = nodes.lambda.size(), nt = tgrid.size();
  if (coef.size() != nn * m) throw std::invalid_argument("coefficient array size mismatch");
  const std::size_t nb = (nn + kReduceBlock - 1) / kReduceBlock;
  const bool uniform = is_uniform(tgrid);
  const double dt = uniform ? (tgrid.back() - tgrid.front()) / double(nt - 1) : 0.0;
  std::vector<std::vector<cplx>> part(nb, std::vector<cplx>(nt * m, cplx(0.0)));
  parallel_for(nb, [&](std::size_t b) {
    auto& acc = part[b];
    std::size_t j0 = b * kReduceBlock, j1 = std::min(nn, j0 + kReduceBlock);
    for (std::size_t j = j0; j < j1; ++j) {
      cplx lam = nodes.lambda[j];
      cplx step = uniform ? std::exp(lam * dt) : cplx(0.0);
      cplx ex = 0.0;
      const cplx* cj = coef.data() + j * m;
      double w = nodes.weight[j];
      for (std::size_t i = 0; i < nt; ++i) {
        // Re-anchor the recurrence every 64 steps.
        ex = (!uniform || i % 64 == 0) ? std::exp(lam * tgrid[i]) : ex * step;
        cplx e = ex * w;
        cplx* a = acc.data() + i * m;
        for (std::size_t k = 0; k < m; ++k) a[k] += cj[k] * e;
      }
    }
  });
  std::vector<cplx> out(nt * m);
  for (std::size_t idx = 0; idx < nt * m; ++idx)
    out[idx] = pairwise_sum<cplx>(0, nb, [&](std::size_t b) { return part[b][idx]; }) / (2.0 * kPi);
  return out;
}

Kernel bromwich_kernel(const Ultrapolynomial& P, const BromwichLine& line, const std::vector<double>& tgrid,
                       double scale) {
  if (!(P.L() * line.abar < 1.0)) throw std::invalid_argument("L * abar must be < 1");
  if (line.certificate > line.tol) throw std::runtime_error("truncation certificate exceeds the tolerance");
  if (std::abs(line.abar - smallest_zero(P)) < 1e-8) throw std::invalid_argument("line node on a zero of P");
  for (double t : tgrid)
    if (t < 0.0) throw std::invalid_argument("kernel times must be nonnegative");
  LineNodes nodes = line_nodes(line);
  std::size_t nn = nodes.lambda.size();
  std::vector<cplx> coef(2 * nn);
  parallel_for(nn, [&](std::size_t j) {
    cplx lam = nodes.lambda[j];
    cplx inv = scale * std::exp(-P.log_eval(cplx(0.0, -1.0) * lam));
    coef[2 * j] = inv;
    coef[2 * j + 1] = inv / lam;
  });
  auto sums = contour_sum(nodes, coef, 2, tgrid);
  cplx base = pairwise_sum<cplx>(0, nn, [&](std::size_t j) { return coef[2 * j + 1] * nodes.weight[j]; }) / (2.0 * kPi);

  Kernel k;
  k.tgrid = tgrid;
  k.line = line;
  k.K.resize(tgrid.size());
  k.Theta.resize(tgrid.size());
  double mre = 0.0, mim = 0.0;
  for (std::size_t i = 0; i < tgrid.size(); ++i) {
    cplx kv = sums[2 * i], th = sums[2 * i + 1] - base;
    k.K[i] = kv.real();
    k.Theta[i] = tgrid[i] == 0.0 ? 0.0 : th.real();
    mre = std::max({mre, std::abs(kv.real()), std::abs(th.real())});
    mim = std::max({mim, std::abs(kv.imag()), std::abs(th.imag())});
    k.envelope = std::max(k.envelope, std::abs(kv.real()) * std::exp(-line.abar * tgrid[i]));
    if (tgrid[i] == 0.0 || (line.oscillatory && tgrid[i] < line.t_min)) k.flagged.push_back(i);
  }
  k.imag_residue = mre > 0.0 ? mim / mre : 0.0;
  return k;
}

std::vector<double> kernel_values(const Ultrapolynomial& P, const BromwichLine& line, const std::vector<double>& times,
                                  double scale) {
  LineNodes nodes = line_nodes(line);
  std::vector<cplx> coef(nodes.lambda.size());
  parallel_for(coef.size(), [&](std::size_t j) { coef[j] = scale * std::exp(-P.log_eval(cplx(0.0, -1.0) * nodes.lambda[j])); });
  auto sums = contour_sum(nodes, coef, 1, times);
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = sums[i].real();
  return out;
}

void Kernel::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "t,K,Theta\n";
  for (std::size_t i = 0; i < tgrid.size(); ++i) out << tgrid[i] << ',' << K[i] << ',' << Theta[i] << '\n';
}

LaplaceResult laplace(double a, double dt, const std::vector<double>& f, cplx lambda, Envelope right, Envelope left,
                      double tol) {
  if (f.size() < 2) throw std::invalid_argument("laplace needs at least two samples");
  auto w = gregory_weights(f.size(), dt);
  LaplaceResult r;
  r.value = pairwise_sum<cplx>(0, f.size(), [&](std::size_t i) {
    double t = a + dt * double(i);
    return w[i] * f[i] * std::exp(-lambda * t);
  });
  double b = a + dt * double(f.size() - 1), re = lambda.real();
  if (right.C > 0.0)
    r.tail += re > right.rate ? right.C * std::exp((right.rate - re) * b) / (re - right.rate) : kInf;
  if (left.C > 0.0)
    r.tail += left.rate > re ? left.C * std::exp((left.rate - re) * a) / (left.rate - re) : kInf;
  r.ok = r.tail <= tol;
  return r;
}

namespace {

TestFunction multiplier(const Ultrapolynomial& P, const TestFunction& f, double sign) {
  std::size_t n = f.n();
  std::vector<cplx> F = f.spectrum();
  double mx = 0.0, tail = 0.0;
  bool overflow = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (F[k] == 0.0) continue;
    double lp = sign * P.eval(f.xi(k)).log_value.real();
    double lm = std::log(std::abs(F[k])) + lp;
    if (lm > 700.0) overflow = true;
    F[k] *= std::exp(lp);
    double a = std::abs(F[k]);
    mx = std::max(mx, a);
    double kk = k <= n / 2 ? double(k) : double(n - k);
    if (kk > 3.0 * double(n) / 8.0) tail = std::max(tail, a);
  }
  // The multiplied spectrum is the primary representation: for large P its
  // inverse transform is dominated by amplified high frequencies.
  TestFunction out = TestFunction::from_spectrum(f.w0(), f.dt(), std::move(F), f.alpha(), f.beta());
  out.warnings = f.warnings;
  if (overflow) out.warnings.push_back("multiplied spectrum overflows");
  if (mx > 0.0 && tail > 1e-8 * mx) out.warnings.push_back("multiplied spectrum is not resolved on the grid");
  return out;
}

}  // namespace

TestFunction apply_P(const Ultrapolynomial& P, const TestFunction& f) { return multiplier(P, f, 1.0); }
TestFunction divide_P(const Ultrapolynomial& P, const TestFunction& f) { return multiplier(P, f, -1.0); }

CauchyReport cauchy_check(const Ultrapolynomial& P, const std::vector<double>& xis, double radius, int order,
                          std::size_t nodes) {
  if (!(radius > 0.0 && radius < 1.0 / P.L())) throw std::invalid_argument("circle must stay inside |Im zeta| < 1/L");
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  CauchyReport rep;
  rep.radius = radius;
  rep.order = order;
  double fact = std::exp(std::lgamma(order + 1.0));
  for (double xi : xis) {
    CauchyPoint pt;
    pt.xi = xi;
    double sup = 0.0;
    std::vector<cplx> terms(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      double th = 2.0 * kPi * double(k) / double(nodes);
      cplx f = std::exp(-P.log_eval(xi + std::polar(radius, th)));
      sup = std::max(sup, std::abs(f));
      terms[k] = f * std::polar(1.0, -double(order) * th);
    }
    pt.derivative = pairwise_sum(terms) * (fact / (double(nodes) * std::pow(radius, order)));
    pt.majorant = fact / std::pow(radius, order) * sup;
    double gauge = assoc(P.weights(), (P.L() + 1.0) * std::abs(xi));
    pt.constant = std::abs(pt.derivative) * std::pow(radius, order) / fact * std::exp(-gauge);
    rep.fitted_constant = std::max(rep.fitted_constant, pt.constant);
    if (std::abs(pt.derivative) > pt.majorant * (1.0 + 1e-9)) rep.within_majorant = false;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace udsg
