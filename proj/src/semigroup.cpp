// SPDX-License-Identifier: Apache-2.0
#include "udsg/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "udsg/parallel.hpp"

namespace udsg {

namespace {

bool uniform_from_zero(const std::vector<double>& t) {
  if (t.size() < 3 || t.front() != 0.0) return false;
  double dt = t.back() / double(t.size() - 1);
  if (!(dt > 0.0)) return false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - dt * double(i)) > 1e-12 * (1.0 + t[i])) return false;
  return true;
}

Matrix to_matrix(const cplx* p, std::size_t n) {
  Matrix M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) M(Eigen::Index(r), Eigen::Index(c)) = p[r * n + c];
  return M;
}

// Deterministic sum of per-index matrices: fixed blocks, pairwise across blocks.
Matrix block_sum(std::size_t count, std::size_t n, const std::function<void(std::size_t, Matrix&)>& add) {
  std::size_t nb = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<Matrix> part(nb, Matrix::Zero(Eigen::Index(n), Eigen::Index(n)));
  parallel_for(nb, [&](std::size_t b) {
    std::size_t j1 = std::min(count, (b + 1) * kReduceBlock);
    for (std::size_t j = b * kReduceBlock; j < j1; ++j) add(j, part[b]);
  });
  Matrix out = Matrix::Zero(Eigen::Index(n), Eigen::Index(n));
  if (nb == 0) return out;
  return pairwise_sum<Matrix>(0, nb, [&](std::size_t b) { return part[b]; });
}

Matrix pair_on_grid(const ConvolutedSemigroup& S, const TestFunction& f) {
  std::vector<double> times(f.n());
  for (std::size_t j = 0; j < f.n(); ++j) times[j] = f.t(j);
  auto Sl = line_values(S, times);
  const auto& v = f.values();
  return block_sum(f.n(), S.gen.dim(), [&](std::size_t j, Matrix& acc) { acc += (f.dt() * v[j]) * Sl[j]; });
}

}  // namespace

double line_resolvent_bound(const Generator& gen, double abar) {
  double omega = gen.spectral_abscissa();
  if (!(abar > omega)) throw std::invalid_argument("line must lie right of the spectrum");
  if (gen.is_diagonal()) {
    double d = std::numeric_limits<double>::infinity();
    for (cplx m : gen.spectrum()) d = std::min(d, abar - m.real());
    return 1.0 / d;
  }
  double best = gen.resolvent_norm(cplx(abar, 0.0));
  for (double y : geometric_grid(1e-2, 1e4, 1.05)) {
    best = std::max(best, gen.resolvent_norm(cplx(abar, y)));
    best = std::max(best, gen.resolvent_norm(cplx(abar, -y)));
  }
  return 1.25 * best;
}

BromwichLine design_semigroup_line(const Generator& gen, const Ultrapolynomial& P, LineDesign d) {
  d.omega = gen.spectral_abscissa();
  d.rnorm = line_resolvent_bound(gen, d.abar);
  return design_line(P, d);
}

ConvolutedSemigroup construct(const Generator& gen, const Ultrapolynomial& P, const BromwichLine& line,
                              const std::vector<double>& tgrid) {
  for (cplx m : gen.spectrum())
    if (line.abar - m.real() < 0.1) throw std::invalid_argument("contour too close to the spectrum (distance < 0.1)");
  if (line.certificate > line.tol) throw std::runtime_error("truncation certificate exceeds the tolerance");
  if (!uniform_from_zero(tgrid)) throw std::invalid_argument("time grid must be uniform on [0, t_max]");

  ConvolutedSemigroup S;
  S.gen = gen;
  S.P = P;
  S.line = line;
  S.tgrid = tgrid;
  S.nodes = line_nodes(line);
  const std::size_t n = gen.dim(), m = n * n, nn = S.nodes.lambda.size();
  S.coef.resize(nn * m);
  parallel_for(nn, [&](std::size_t j) {
    cplx lam = S.nodes.lambda[j];
    cplx inv = std::exp(-P.log_eval(cplx(0.0, -1.0) * lam));
    Matrix R = gen.resolvent(lam);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) S.coef[j * m + r * n + c] = R(Eigen::Index(r), Eigen::Index(c)) * inv;
  });
  auto sums = contour_sum(S.nodes, S.coef, m, tgrid);
  S.S_line.resize(tgrid.size());
  S.S.resize(tgrid.size());
  for (std::size_t i = 0; i < tgrid.size(); ++i) S.S_line[i] = to_matrix(sums.data() + i * m, n);
  S.S_line0 = S.S_line[0];
  S.S[0] = Matrix::Zero(Eigen::Index(n), Eigen::Index(n));
  parallel_for(tgrid.size() - 1, [&](std::size_t k) {
    std::size_t i = k + 1;
    S.S[i] = S.S_line[i] - gen.expm(tgrid[i]) * S.S_line0;
  });
  S.kernel = bromwich_kernel(P, line, tgrid);
  return S;
}

std::vector<Matrix> line_values(const ConvolutedSemigroup& S, const std::vector<double>& times) {
  const std::size_t n = S.gen.dim();
  auto sums = contour_sum(S.nodes, S.coef, n * n, times);
  std::vector<Matrix> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = to_matrix(sums.data() + i * n * n, n);
  return out;
}

double identity_residual(const ConvolutedSemigroup& S, const Vector& x, std::size_t ti) {
  if (ti >= S.tgrid.size()) throw std::out_of_range("grid index out of range");
  std::vector<Vector> f(S.tgrid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = S.S[i] * x;
  double h = S.tgrid[1] - S.tgrid[0];
  const Eigen::Index n = x.size();
  Vector I(n);
  std::vector<cplx> comp(f.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < f.size(); ++i) comp[i] = f[i](k);
    I(k) = cumulative_simpson<cplx>(std::span<const cplx>(comp), h)[ti];
  }
  Vector r = S.gen.matrix() * I - f[ti] + S.kernel.Theta[ti] * x;
  return r.norm() / (1.0 + f[ti].norm() + std::abs(S.kernel.Theta[ti]) * x.norm());
}

double identity_residual_max(const ConvolutedSemigroup& S) {
  const Eigen::Index n = Eigen::Index(S.gen.dim());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector x = Vector::Unit(n, k);
    for (std::size_t i = 0; i < S.tgrid.size(); ++i) worst = std::max(worst, identity_residual(S, x, i));
  }
  return worst;
}

std::vector<RefinementRow> identity_refinement(const Generator& gen, const Ultrapolynomial& P,
                                               const BromwichLine& line, double t_max, std::size_t points,
                                               int levels) {
  std::vector<RefinementRow> rows;
  for (int l = 0; l <= levels; ++l) {
    std::size_t np = (points - 1) * (std::size_t(1) << l) + 1;
    std::vector<double> t(np);
    for (std::size_t i = 0; i < np; ++i) t[i] = t_max * double(i) / double(np - 1);
    auto S = construct(gen, P, line, t);
    RefinementRow row;
    row.points = np;
    row.dt = t_max / double(np - 1);
    row.residual = identity_residual_max(S);
    row.ratio = rows.empty() ? 0.0 : rows.back().residual / row.residual;
    rows.push_back(row);
  }
  return rows;
}

double commutation_residual(const ConvolutedSemigroup& S) {
  const Matrix& A = S.gen.matrix();
  double worst = 0.0;
  for (const Matrix& M : S.S) worst = std::max(worst, (A * M - M * A).norm() / (1.0 + operator_norm(M)));
  return worst;
}

double max_offdiagonal(const ConvolutedSemigroup& S) {
  double worst = 0.0;
  for (const Matrix& M : S.S)
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      for (Eigen::Index c = 0; c < M.cols(); ++c)
        if (r != c) worst = std::max(worst, std::abs(M(r, c)));
  return worst;
}

Matrix udsg_apply(const ConvolutedSemigroup& S, const TestFunction& phi) {
  const std::size_t n = S.gen.dim();
  const double abar = S.line.abar, gap = abar - S.gen.spectral_abscissa();
  if (!(gap > 0.0)) throw std::invalid_argument("line must lie right of the spectrum");
  const double w0 = phi.w0(), dt = phi.dt();
  const double images = std::log(1e17) / gap - w0;
  const double tau = std::max({phi.w1() + dt, dt * double(phi.n()), images});
  const std::size_t np = next_pow2(std::size_t(std::ceil(tau / dt)) + 1);

  std::vector<cplx> x(np, cplx(0.0));
  for (std::size_t j = 0; j < phi.n(); ++j) x[j] = phi.values()[j] * std::exp(abar * phi.t(j));
  dft(x, +1);
  double peak = 0.0;
  for (cplx v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return Matrix::Zero(Eigen::Index(n), Eigen::Index(n));

  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < np; ++k)
    if (std::abs(x[k]) >= 1e-17 * peak) keep.push_back(k);
  const double period = double(np) * dt;
  Matrix G = block_sum(keep.size(), n, [&](std::size_t i, Matrix& acc) {
    std::size_t k = keep[i];
    double ks = k <= np / 2 ? double(k) : double(k) - double(np);
    double y = 2.0 * kPi * ks / period;
    cplx lam(abar, y);
    cplx Lphi = dt * std::exp(cplx(0.0, y * w0)) * x[k];
    cplx lp = S.P.log_eval(cplx(0.0, -1.0) * lam);
    if (lp.real() > 700.0) throw std::runtime_error("multiplier overflow on the line");
    cplx mult = std::exp(lp);
    cplx paired = (mult * Lphi) / mult;
    acc += paired * S.gen.resolvent(lam);
  });
  return G / period;
}

Matrix udsg_apply_time(const ConvolutedSemigroup& S, const TestFunction& phi) {
  return pair_on_grid(S, apply_P(S.P, phi));
}

Matrix udsg_apply_series(const ConvolutedSemigroup& S, const TestFunction& phi, int terms) {
  const auto& a = S.P.coeffs();
  if (a.empty()) throw std::invalid_argument("coefficient series unavailable for this N");
  for (std::size_t p = 1; p < a.size(); p += 2)
    if (a[p] != 0.0) throw std::logic_error("ultrapolynomial must be even");
  std::vector<cplx> acc(phi.n(), cplx(0.0));
  int used = 0;
  for (std::size_t p = 0; p < a.size() && used < terms; p += 2) {
    if (a[p] == 0.0) continue;
    ++used;
    double sign = (p / 2) % 2 == 0 ? 1.0 : -1.0;
    TestFunction d = p == 0 ? phi : derivative(phi, int(p));
    for (std::size_t j = 0; j < phi.n(); ++j) acc[j] += sign * a[p] * d.values()[j];
  }
  return pair_on_grid(S, TestFunction(phi.w0(), phi.dt(), std::move(acc), phi.alpha(), phi.beta()));
}

double composition_residual(const ConvolutedSemigroup& S, const TestFunction& phi, const TestFunction& psi,
                            bool causal) {
  if (causal) {
    double half = 0.5 * S.tgrid.back();
    for (const TestFunction* f : {&phi, &psi})
      if (!(f->alpha() >= 0.0 && f->beta() <= half)) throw std::invalid_argument("support overflow: need supp in (0, t_max/2)");
  }
  TestFunction conv = causal ? convolve0(phi, psi) : convolve(phi, psi, false);
  Matrix Gc = udsg_apply(S, conv), Gp = udsg_apply(S, phi), Gq = udsg_apply(S, psi);
  return operator_norm(Gc - Gp * Gq) / (1.0 + operator_norm(Gp) * operator_norm(Gq));
}

Matrix fundamental_defect(const ConvolutedSemigroup& S, const TestFunction& phi) {
  Matrix Gd = udsg_apply(S, scale(derivative(phi, 1), -1.0));
  Matrix G = udsg_apply(S, phi);
  const Eigen::Index n = Eigen::Index(S.gen.dim());
  return Gd - S.gen.matrix() * G - phi.at(0.0) * Matrix::Identity(n, n);
}

double fundamental_residual(const ConvolutedSemigroup& S, const TestFunction& phi, const Vector& x) {
  if (x.norm() == 0.0) return 0.0;
  return (fundamental_defect(S, phi) * x).norm() / (1.0 + x.norm());
}

double resolvent_tail(const Generator& gen, cplx lambda, double T) {
  double omega = gen.spectral_abscissa(), gap = lambda.real() - omega;
  if (!(gap > 0.0)) throw std::invalid_argument("lambda must lie right of the spectrum");
  double kappa = 1.0;
  if (!gen.is_diagonal()) {
    kappa = 0.0;
    for (int i = 0; i <= 64; ++i) {
      double t = T * i / 64.0;
      kappa = std::max(kappa, operator_norm(gen.expm(t)) * std::exp(-omega * t));
    }
  }
  return kappa * std::exp(-gap * T) / gap;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

Matrix resolvent_reconstruct(const ConvolutedSemigroup& S, cplx lambda, const TestFunction& g, double tol) {
  double end = g.w1() - 1.0, start = end - 1.0;
  if (!(start > 0.0)) throw std::invalid_argument("ramp window too short for the taper");
  double tail = resolvent_tail(S.gen, lambda, start);
  if (tail > tol) throw std::runtime_error("truncation tail " + std::to_string(tail) + " exceeds tolerance");
  std::vector<cplx> v(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) {
    double t = g.t(j);
    v[j] = g.values()[j] * std::exp(-lambda * t) * (1.0 - smooth_step(t - start));
  }
  return udsg_apply(S, TestFunction(g.w0(), g.dt(), std::move(v), g.alpha(), end));
}

NondegeneracyReport nondegeneracy(const ConvolutedSemigroup& S, const std::vector<TestFunction>& battery,
                                  double threshold) {
  const Eigen::Index n = Eigen::Index(S.gen.dim());
  NondegeneracyReport rep;
  rep.max_norm.assign(std::size_t(n), 0.0);
  for (const TestFunction& f : battery) {
    Matrix G = udsg_apply(S, f);
    for (Eigen::Index k = 0; k < n; ++k) rep.max_norm[std::size_t(k)] = std::max(rep.max_norm[std::size_t(k)], G.col(k).norm());
  }
  rep.margin = *std::min_element(rep.max_norm.begin(), rep.max_norm.end());
  rep.pass = rep.margin > threshold;
  return rep;
}

}  // namespace udsg
