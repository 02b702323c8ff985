// SPDX-License-Identifier: Apache-2.0
#include "udsg/ultrapoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace udsg {

namespace {

constexpr int kSeriesTerms = 28;
constexpr int kMaxSeriesN = 20000;

// sum_{p > N} 1 / m_p^2 from the stored table plus an extrapolated tail.
double inverse_square_tail(const WeightSequence& W, int N) {
  if (W.gevrey_index) return zeta_tail(2.0 * *W.gevrey_index, N);
  double acc = 0.0;
  for (int p = W.pmax; p > N; --p) acc += 1.0 / (W.m[p - 1] * W.m[p - 1]);
  int P = W.pmax, h = std::max(1, P / 2);
  double sigma = (W.logm[P - 1] - W.logm[h - 1]) / std::log(double(P) / double(h));
  if (!(2.0 * sigma > 1.0)) return std::numeric_limits<double>::infinity();
  double scale = std::pow(double(P), sigma) / W.m[P - 1];
  return acc + scale * scale * zeta_tail(2.0 * sigma, P);
}

}  // namespace

Ultrapolynomial build(const WeightSequence& W, double L, int N) {
  if (!(L > 0.0)) throw std::invalid_argument("ultrapolynomial scale L must be positive");
  if (N < 0) throw std::invalid_argument("factor count must be nonnegative");
  if (N > W.pmax && !W.gevrey_index)
    throw std::invalid_argument("N exceeds pmax of an explicit weight table");
  Ultrapolynomial P;
  P.W_ = W;
  P.L_ = L;
  P.N_ = N;
  P.c_.resize(N);
  for (int p = 1; p <= N; ++p) P.c_[p - 1] = std::exp(2.0 * (std::log(L) - W.log_ratio(p)));
  P.tail_ = L * L * inverse_square_tail(W, N);
  P.finalize();
  return P;
}

Ultrapolynomial build_scaled(const WeightSequence& W, const std::vector<double>& scales) {
  int N = int(scales.size());
  if (N > W.pmax && !W.gevrey_index)
    throw std::invalid_argument("N exceeds pmax of an explicit weight table");
  Ultrapolynomial P;
  P.W_ = W;
  P.N_ = N;
  P.L_ = N ? scales.front() : 1.0;
  P.c_.resize(N);
  for (int p = 1; p <= N; ++p) {
    if (!(scales[p - 1] > 0.0)) throw std::invalid_argument("factor scales must be positive");
    P.c_[p - 1] = std::exp(2.0 * (std::log(scales[p - 1]) - W.log_ratio(p)));
  }
  double last = N ? scales.back() : 1.0;
  P.tail_ = last * last * inverse_square_tail(W, N);
  P.finalize();
  return P;
}

void Ultrapolynomial::finalize() {
  monotone_ = std::is_sorted(c_.rbegin(), c_.rend());

  if (N_ <= kMaxCoeffN) {
    // Elementary symmetric functions of c_p, all positive, kept in log-space.
    log_even_.assign(N_ + 1, kNegInf);
    log_even_[0] = 0.0;
    for (int p = 1; p <= N_; ++p) {
      double lc = std::log(c_[p - 1]);
      for (int j = p; j >= 1; --j) log_even_[j] = log_add_exp(log_even_[j], lc + log_even_[j - 1]);
    }
    coeffs_.assign(2 * N_ + 1, 0.0);
    for (int j = 0; j <= N_; ++j) coeffs_[2 * j] = std::exp(log_even_[j]);
  }

  if (monotone_ && N_ <= kMaxSeriesN && N_ > 0) {
    K_ = kSeriesTerms;
    suffix_pow_.assign(std::size_t(N_ + 1) * K_, 0.0);
    for (int p0 = N_ - 1; p0 >= 0; --p0) {
      double c = c_[p0], ck = 1.0;
      for (int k = 1; k <= K_; ++k) {
        ck *= c;
        suffix_pow_[std::size_t(p0) * K_ + k - 1] = suffix_pow_[std::size_t(p0 + 1) * K_ + k - 1] + ck;
      }
    }
  }
}

namespace {

struct Running {
  cplx prod{1.0, 0.0};
  double log_scale = 0.0;
  bool zero = false;
  void mul(cplx f) {
    if (f == 0.0) {
      zero = true;
      return;
    }
    prod *= f;
    double a = std::abs(prod);
    if (a > 1e150 || a < 1e-150) {
      log_scale += std::log(a);
      prod /= a;
    }
  }
};

Ultrapolynomial::Value finish_value(const Running& run, cplx tail_log, double rel_err) {
  Ultrapolynomial::Value v;
  v.rel_error_bound = rel_err;
  if (run.zero) {
    v.zero = true;
    v.value = 0.0;
    v.log_value = cplx(kNegInf, 0.0);
    return v;
  }
  v.log_value = cplx(run.log_scale + std::log(std::abs(run.prod)) + tail_log.real(), std::arg(run.prod) + tail_log.imag());
  if (v.log_value.real() < 700.0) {
    v.value = std::exp(v.log_value);
  } else {
    double inf = std::numeric_limits<double>::infinity();
    v.value = cplx(std::cos(v.log_value.imag()) * inf, std::sin(v.log_value.imag()) * inf);
  }
  return v;
}

}  // namespace

Ultrapolynomial::Value Ultrapolynomial::eval(cplx zeta) const {
  cplx z = zeta * zeta;
  double r2 = std::norm(zeta);
  double rel = std::expm1(tail_ * r2);
  if (K_ == 0) return eval_direct(zeta);
  // Factors with c_p |zeta|^2 > 1/4 are multiplied out; the rest go through
  // the power series of log(1 + c_p zeta^2) using precomputed power sums.
  int p0 = int(std::partition_point(c_.begin(), c_.end(), [&](double c) { return c * r2 > 0.25; }) - c_.begin());
  Running run;
  for (int p = 0; p < p0 && !run.zero; ++p) run.mul(1.0 + c_[p] * z);
  cplx tail(0.0, 0.0), zk(1.0, 0.0);
  const double* S = suffix_pow_.data() + std::size_t(p0) * K_;
  for (int k = 1; k <= K_; ++k) {
    zk *= z;
    double sk = S[k - 1];
    if (sk == 0.0) break;
    cplx term = zk * (sk / k);
    tail += (k % 2 == 1) ? term : -term;
    if (std::abs(term) < 1e-18 * std::abs(tail)) break;
  }
  return finish_value(run, tail, rel);
}

Ultrapolynomial::Value Ultrapolynomial::eval_direct(cplx zeta) const {
  cplx z = zeta * zeta;
  Running run;
  for (int p = 0; p < N_ && !run.zero; ++p) run.mul(1.0 + c_[p] * z);
  return finish_value(run, cplx(0.0, 0.0), std::expm1(tail_ * std::norm(zeta)));
}

bool region_contains(cplx zeta, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("region needs L > 0");
  return std::abs(zeta.imag()) < std::abs(zeta.real()) / 2.0 + 1.0 / L;
}

std::vector<cplx> region_samples(double L, std::size_t count, double rmin, double rmax) {
  std::vector<cplx> out;
  out.reserve(count);
  double lmin = std::log(rmin), lmax = std::log(rmax);
  for (std::size_t i = 1; out.size() < count; ++i) {
    double r = std::exp(lmin + (lmax - lmin) * halton(i, 2));
    double th = 2.0 * kPi * halton(i, 3);
    cplx z = std::polar(r, th);
    if (region_contains(z, L)) out.push_back(z);
  }
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, double factor) {
  std::vector<double> g;
  for (double x = lo; x <= hi * (1.0 + 1e-12); x *= factor) g.push_back(x);
  return g;
}

BoundReport verify_growth_bounds(const Ultrapolynomial& P, const std::vector<cplx>& samples) {
  const auto& W = P.weights();
  const double L = P.L();
  BoundReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_margin_alt = std::numeric_limits<double>::infinity();
  for (cplx z : samples)
    if (!region_contains(z, L)) throw std::invalid_argument("growth-bound sample outside the region");

  rep.samples.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    cplx z = samples[i];
    BoundSample& s = rep.samples[i];
    s.zeta = z;
    double r = std::abs(z);
    s.log_abs_P = P.eval(z).log_value.real();
    auto mL = assoc_full(W, L * r);
    auto m1 = assoc_full(W, r);
    rep.saturated = rep.saturated || mL.saturated || m1.saturated;
    s.trivial = mL.argmax == 0;
    s.lower_margin = s.log_abs_P - 2.0 * mL.value + P.tail_log_bound(r);
    s.lower_margin_alt = s.log_abs_P - 2.0 * m1.value;
    s.re_zeta2_nonneg = (z * z).real() >= 0.0;
    bool fail = s.lower_margin < -1e-10 * (1.0 + std::abs(s.log_abs_P));
    if (s.re_zeta2_nonneg) {
      rep.violations += fail;
      rep.min_margin = std::min(rep.min_margin, s.lower_margin);
    } else {
      ++rep.outside_proof_range;
      rep.violations_outside += fail;
    }
    if (s.lower_margin_alt < -1e-10 * (1.0 + std::abs(s.log_abs_P))) ++rep.violations_alt;
    rep.min_margin_alt = std::min(rep.min_margin_alt, s.lower_margin_alt);
  }

  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(samples[a]) < std::abs(samples[b]); });
  std::vector<double> x, y;
  for (std::size_t i : order) {
    x.push_back(std::abs(samples[i]));
    y.push_back(rep.samples[i].log_abs_P);
  }
  rep.upper = fit_stable_rate(x, y, geometric_grid(0.25 * L, 40.0 * L, 1.01),
                              [&](double r, double xi) { return assoc(W, r * xi); });
  if (rep.upper.found) rep.upper.argmax = order[rep.upper.argmax];
  return rep;
}

namespace {

ConjugateReport conjugate_log(const std::vector<SignedLog>& a, double shift, int jmax, const WeightSequence*) {
  int P = int(a.size()) - 1;
  if (P < 0) throw std::invalid_argument("empty coefficient list");
  if (jmax > P || jmax < 0) throw std::invalid_argument("jmax must lie in [0, P]");
  ConjugateReport rep;
  rep.b_log.resize(jmax + 1);
  rep.b.resize(jmax + 1);
  double ls = shift == 0.0 ? kNegInf : std::log(std::abs(shift));
  std::vector<double> lt;
  std::vector<double> sg;
  for (int j = 0; j <= jmax; ++j) {
    lt.clear();
    sg.clear();
    int kmax = shift == 0.0 ? 0 : P - j;
    for (int k = 0; k <= kmax; ++k) {
      const SignedLog& ak = a[k + j];
      if (ak.sign == 0.0) continue;
      double sign = ak.sign * ((shift > 0.0 && k % 2 == 1) ? -1.0 : 1.0);
      lt.push_back(log_binomial(k + j, j) + (k ? k * ls : 0.0) + ak.log_abs);
      sg.push_back(sign);
    }
    SignedLog bj;
    if (!lt.empty()) {
      double mx = *std::max_element(lt.begin(), lt.end());
      double pos = 0.0, neg = 0.0;
      for (std::size_t i = 0; i < lt.size(); ++i) (sg[i] > 0 ? pos : neg) += std::exp(lt[i] - mx);
      double d = pos - neg;
      if (d != 0.0) {
        bj.sign = d > 0 ? 1.0 : -1.0;
        bj.log_abs = mx + std::log(std::abs(d));
      }
    }
    rep.b_log[j] = bj;
    rep.b[j] = bj.value();
  }
  return rep;
}

void fit_conjugate(ConjugateReport& rep, const WeightSequence* W) {
  if (!W) return;
  std::vector<double> x, y;
  for (std::size_t j = 0; j < rep.b_log.size(); ++j) {
    if (rep.b_log[j].sign == 0.0) continue;
    x.push_back(double(j));
    y.push_back(rep.b_log[j].log_abs + W->log_weight(long(j)));
  }
  rep.fit = fit_envelope_rate(x, y);
  rep.fitted = rep.fit.found;
}

}  // namespace

ConjugateReport exp_conjugate_log(const std::vector<SignedLog>& a, double shift, int jmax, const WeightSequence* W) {
  ConjugateReport rep = conjugate_log(a, shift, jmax, W);
  fit_conjugate(rep, W);
  return rep;
}

ConjugateReport exp_conjugate(const std::vector<double>& a, double shift, int jmax, const WeightSequence* W) {
  int P = int(a.size()) - 1;
  if (P < 0) throw std::invalid_argument("empty coefficient list");
  if (jmax > P || jmax < 0) throw std::invalid_argument("jmax must lie in [0, P]");
  if (P > 50) {
    std::vector<SignedLog> al(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) al[i] = SignedLog::from(a[i]);
    return exp_conjugate_log(al, shift, jmax, W);
  }
  // Short lists: plain arithmetic with Pascal binomials.
  std::vector<std::vector<double>> C(P + 1, std::vector<double>(P + 1, 0.0));
  for (int n = 0; n <= P; ++n) {
    C[n][0] = C[n][n] = 1.0;
    for (int k = 1; k < n; ++k) C[n][k] = C[n - 1][k - 1] + C[n - 1][k];
  }
  ConjugateReport rep;
  rep.b.assign(jmax + 1, 0.0);
  rep.b_log.resize(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    double acc = 0.0, pw = 1.0;
    for (int k = 0; k + j <= P; ++k) {
      acc += C[k + j][j] * pw * a[k + j];
      pw *= -shift;
    }
    rep.b[j] = acc;
    rep.b_log[j] = SignedLog::from(acc);
  }
  fit_conjugate(rep, W);
  return rep;
}

RateFit coefficient_decay_fit(const Ultrapolynomial& P) {
  const auto& le = P.log_even_coeffs();
  std::vector<double> x, y;
  for (std::size_t j = 1; j < le.size(); ++j) {
    if (!std::isfinite(le[j])) continue;
    x.push_back(double(2 * j));
    y.push_back(le[j] + P.weights().log_weight(long(2 * j)));
  }
  x.insert(x.begin(), 0.0);
  y.insert(y.begin(), 0.0);
  return fit_envelope_rate(x, y);
}

RateFit fit_envelope_rate(const std::vector<double>& x, const std::vector<double>& y) {
  RateFit out;
  if (x.size() < 2) return out;
  double best = kNegInf;
  for (std::size_t i = 1; i < x.size(); ++i) {
    double slope = (y[i] - y[0]) / (x[i] - x[0]);
    if (slope > best) {
      best = slope;
      out.argmax = i;
    }
  }
  out.found = std::isfinite(best);
  out.rate = std::exp(best);
  // Constant at x = 0: y_0 - x_0 log rate.
  out.log_constant = y[0] - x[0] * best;
  return out;
}

}  // namespace udsg
