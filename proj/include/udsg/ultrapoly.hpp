// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "udsg/numerics.hpp"
#include "udsg/weights.hpp"

namespace udsg {

// Truncated product P(zeta) = prod_{p=1..N} (1 + c_p zeta^2), c_p = (L_p / m_p)^2.
class Ultrapolynomial {
 public:
  Ultrapolynomial() = default;

  const WeightSequence& weights() const { return W_; }
  double L() const { return L_; }
  int N() const { return N_; }
  const std::vector<double>& factor_coeffs() const { return c_; }

  // Power-series coefficients a_p, p = 0..2N. Empty when N exceeds kMaxCoeffN.
  const std::vector<double>& coeffs() const { return coeffs_; }
  // log a_{2j}, j = 0..N (odd coefficients vanish). Empty when N exceeds kMaxCoeffN.
  const std::vector<double>& log_even_coeffs() const { return log_even_; }

  // sum_{p > N} (L / m_p)^2, so the certificate is |zeta|^2 times this.
  double tail_coeff() const { return tail_; }
  double tail_log_bound(double r) const { return tail_ * r * r; }

  struct Value {
    cplx value;              // inf components when the modulus overflows
    cplx log_value;          // log|P| + i arg P, with arg summed over factors
    double rel_error_bound;  // exp(tail_log_bound(|zeta|)) - 1
    bool zero = false;
  };
  Value eval(cplx zeta) const;
  cplx log_eval(cplx zeta) const { return eval(zeta).log_value; }
  // Reference evaluation: plain factor-by-factor product with rescaling.
  Value eval_direct(cplx zeta) const;

  static constexpr int kMaxCoeffN = 4096;

  friend Ultrapolynomial build(const WeightSequence& W, double L, int N);
  friend Ultrapolynomial build_scaled(const WeightSequence& W, const std::vector<double>& scales);

 private:
  void finalize();

  WeightSequence W_;
  double L_ = 0.0;
  int N_ = 0;
  std::vector<double> c_;
  std::vector<double> coeffs_;
  std::vector<double> log_even_;
  double tail_ = 0.0;
  bool monotone_ = true;
  int K_ = 0;
  std::vector<double> suffix_pow_;  // suffix_pow_[p0 * K_ + k - 1] = sum_{p > p0} c_p^k
};

Ultrapolynomial build(const WeightSequence& W, double L, int N);
// One scale per factor (Roumieu-type products); no bound verification is attached.
Ultrapolynomial build_scaled(const WeightSequence& W, const std::vector<double>& scales);

// |Im zeta| < |Re zeta| / 2 + 1 / L, strict.
bool region_contains(cplx zeta, double L);

// Deterministic Halton points inside the region with |zeta| in [rmin, rmax],
// log-uniform in modulus.
std::vector<cplx> region_samples(double L, std::size_t count, double rmin, double rmax);

// Smallest rate r on a geometric candidate grid for which
// sup_i (y_i - M-like gauge) is attained away from the outer decile of x.
struct RateFit {
  bool found = false;
  double rate = 0.0;
  double log_constant = 0.0;
  std::size_t argmax = 0;
};
// Gauge g(rate, x_i) supplied by the caller; x must be sorted ascending.
template <class Gauge>
RateFit fit_stable_rate(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& candidates, const Gauge& gauge);

struct BoundSample {
  cplx zeta;
  double log_abs_P = 0.0;
  double lower_margin = 0.0;      // log|P| - 2 M(L|zeta|) + tail allowance
  double lower_margin_alt = 0.0;  // log|P| - 2 M(|zeta|)
  bool re_zeta2_nonneg = true;
  bool trivial = false;  // M(L|zeta|) attained at p = 0
};

struct BoundReport {
  std::vector<BoundSample> samples;
  std::size_t violations = 0;          // lower bound, samples with Re zeta^2 >= 0
  std::size_t outside_proof_range = 0;  // samples with Re zeta^2 < 0
  std::size_t violations_outside = 0;   // lower-bound failures among those
  std::size_t violations_alt = 0;       // e^{2M(|zeta|)} variant
  double min_margin = 0.0;
  double min_margin_alt = 0.0;
  bool saturated = false;
  RateFit upper;  // log|P| <= log C + M(L1 |zeta|), rate = L1
};

// Throws if a sample lies outside the region.
BoundReport verify_growth_bounds(const Ultrapolynomial& P, const std::vector<cplx>& samples);

struct ConjugateReport {
  std::vector<double> b;  // b_j, j = 0..jmax (may underflow to 0; see log_abs_b)
  std::vector<SignedLog> b_log;
  RateFit fit;  // envelope of log|b_j| + log M_j, rate = Lhat
  bool fitted = false;
};

// b_j = sum_{k=0}^{P-j} C(k+j, j) (-shift)^k a_{k+j}, j = 0..jmax.
ConjugateReport exp_conjugate(const std::vector<double>& a, double shift, int jmax,
                              const WeightSequence* W = nullptr);
ConjugateReport exp_conjugate_log(const std::vector<SignedLog>& a, double shift, int jmax,
                              const WeightSequence* W = nullptr);

// Fitted C_1, L_2 in a_p <= C_1 L_2^p / M_p over even p with a_p > 0.
RateFit coefficient_decay_fit(const Ultrapolynomial& P);

// Envelope through the first point: rate = max_i exp((y_i - y_0) / (x_i - x_0)),
// so y_i <= y_0 + (x_i - x_0) log rate for all i. Used for coefficient sequences.
RateFit fit_envelope_rate(const std::vector<double>& x, const std::vector<double>& y);

// Geometric grid lo, lo*f, ..., up to hi.
std::vector<double> geometric_grid(double lo, double hi, double factor);

template <class Gauge>
RateFit fit_stable_rate(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& candidates, const Gauge& gauge) {
  RateFit out;
  if (x.empty()) return out;
  // Outer decile by rank; ties in x share the lower rank.
  std::size_t cut = x.size() - x.size() / 10;
  double xcut = x[std::min(cut, x.size() - 1)];
  for (double r : candidates) {
    double best = kNegInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = y[i] - gauge(r, x[i]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (x.size() < 10 || x[arg] < xcut) {
      out.found = true;
      out.rate = r;
      out.log_constant = best;
      out.argmax = arg;
      return out;
    }
  }
  return out;
}

}  // namespace udsg
