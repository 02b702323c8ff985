// SPDX-License-Identifier: Apache-2.0
#include "udsg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "udsg/numerics.hpp"

namespace udsg {

namespace {

void finish(WeightSequence& W) {
  W.pmax = int(W.logM.size()) - 1;
  W.m.resize(W.pmax);
  W.logm.resize(W.pmax);
  for (int p = 1; p <= W.pmax; ++p) {
    double lm = W.logM[p] - W.logM[p - 1];
    if (W.gevrey_index) lm = *W.gevrey_index * std::log(double(p));
    W.logm[p - 1] = lm;
    W.m[p - 1] = W.gevrey_index ? std::pow(double(p), *W.gevrey_index) : std::exp(lm);
  }
  W.log_convex = true;
  for (int p = 1; p < W.pmax; ++p)
    if (W.logm[p] < W.logm[p - 1]) W.log_convex = false;
}

}  // namespace

double WeightSequence::ratio(long p) const {
  if (p < 1) throw std::out_of_range("ratio index must be >= 1");
  if (p <= pmax) return m[p - 1];
  if (gevrey_index) return std::pow(double(p), *gevrey_index);
  throw std::out_of_range("ratio beyond pmax of an explicit table");
}

double WeightSequence::log_ratio(long p) const {
  if (p < 1) throw std::out_of_range("ratio index must be >= 1");
  if (p <= pmax) return logm[p - 1];
  if (gevrey_index) return *gevrey_index * std::log(double(p));
  throw std::out_of_range("ratio beyond pmax of an explicit table");
}

double WeightSequence::log_weight(long p) const {
  if (p < 0) throw std::out_of_range("weight index must be >= 0");
  if (p <= pmax) return logM[p];
  if (gevrey_index) return *gevrey_index * std::lgamma(double(p) + 1.0);
  throw std::out_of_range("weight beyond pmax of an explicit table");
}

WeightSequence make_gevrey(double s, int pmax) {
  if (!(s > 1.0)) throw std::invalid_argument("Gevrey index must exceed 1");
  if (pmax < 2) throw std::invalid_argument("pmax must be at least 2");
  WeightSequence W;
  W.gevrey_index = s;
  W.logM.assign(pmax + 1, 0.0);
  double acc = 0.0;
  for (int p = 1; p <= pmax; ++p) {
    acc += std::log(double(p));
    W.logM[p] = s * acc;
  }
  finish(W);
  return W;
}

WeightSequence from_log_table(const std::vector<double>& logM) {
  if (logM.size() < 3) throw std::invalid_argument("table needs M_0..M_2 at least");
  if (logM[0] != 0.0) throw std::invalid_argument("M_0 must equal 1");
  for (double v : logM)
    if (!std::isfinite(v)) throw std::invalid_argument("weights must be positive and finite");
  WeightSequence W;
  W.logM = logM;
  finish(W);
  return W;
}

WeightSequence from_table(const std::vector<double>& M) {
  std::vector<double> lg(M.size());
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (!(M[i] > 0.0)) throw std::invalid_argument("weights must be positive");
    lg[i] = std::log(M[i]);
  }
  return from_log_table(lg);
}

double zeta_tail(double s, long P) {
  if (!(s > 1.0)) return std::numeric_limits<double>::infinity();
  double direct = 0.0;
  long P0 = std::max<long>(P, 32);
  for (long p = P0; p > P; --p) direct += std::pow(double(p), -s);
  double x = double(P0);
  double em = std::pow(x, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(x, -s) + s * std::pow(x, -s - 1.0) / 12.0 -
              s * (s + 1) * (s + 2) * std::pow(x, -s - 3.0) / 720.0 +
              s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(x, -s - 5.0) / 30240.0;
  return direct + em;
}

ConditionReport verify_conditions(const WeightSequence& W) {
  ConditionReport r;
  const int P = W.pmax;

  r.m1_min_slack = std::numeric_limits<double>::infinity();
  for (int p = 1; p < P; ++p) {
    double slack = W.logM[p - 1] + W.logM[p + 1] - 2.0 * W.logM[p];
    if (slack < r.m1_min_slack) {
      r.m1_min_slack = slack;
      if (slack < -1e-12) r.m1_witness = p;
    }
  }
  // Report the first violating index, not the worst one.
  for (int p = 1; p < P; ++p) {
    if (W.logM[p - 1] + W.logM[p + 1] - 2.0 * W.logM[p] < -1e-12) {
      r.m1_witness = p;
      break;
    }
  }
  r.m1_pass = r.m1_witness < 0;

  std::vector<double> E(P + 1, 0.0);
  for (int n = 0; n <= P; ++n) {
    double best = kNegInf;
    for (int p = 0; p <= n; ++p) best = std::max(best, W.logM[n] - W.logM[p] - W.logM[n - p]);
    E[n] = best;
  }
  int q = std::max(1, P / 4);
  double slope_late = (E[P] - E[P - q]) / q;
  double slope_mid = (E[P - q] - E[P - 2 * q]) / q;
  double logH = std::max(0.0, slope_late);
  double logA = kNegInf;
  for (int n = 0; n <= P; ++n) logA = std::max(logA, E[n] - n * logH);
  r.m2_H = std::exp(logH);
  r.m2_A = std::exp(logA);
  r.m2_pass = std::isfinite(logA) && (slope_late <= 1.1 * std::max(slope_mid, 0.0) + 1e-3);

  std::vector<double> inv(P);
  for (int p = 1; p <= P; ++p) inv[p - 1] = 1.0 / W.m[p - 1];
  r.m3prime_partial = pairwise_sum(inv);
  if (W.gevrey_index) {
    r.growth_exponent = *W.gevrey_index;
    r.m3prime_tail = zeta_tail(*W.gevrey_index, P);
  } else {
    int h = std::max(1, P / 2);
    r.growth_exponent = (W.logm[P - 1] - W.logm[h - 1]) / std::log(double(P) / double(h));
    r.m3prime_tail = r.growth_exponent > 1.0
                         ? std::pow(double(P), r.growth_exponent) / W.m[P - 1] * zeta_tail(r.growth_exponent, P)
                         : std::numeric_limits<double>::infinity();
  }
  r.m3prime_pass = std::isfinite(r.m3prime_tail) && r.growth_exponent > 1.0;

  std::vector<double> suffix(P + 1, 0.0);
  suffix[P] = r.m3prime_tail;
  for (int p = P - 1; p >= 0; --p) suffix[p] = suffix[p + 1] + inv[p];
  double c3 = 0.0;
  for (int p = 1; p <= P; ++p) c3 = std::max(c3, W.m[p - 1] / p * suffix[p]);
  r.m3_constant = c3;
  r.m3_pass = std::isfinite(c3);
  return r;
}

AssocResult assoc_full(const WeightSequence& W, double rho) {
  if (rho < 0.0 || std::isnan(rho)) throw std::invalid_argument("assoc needs rho >= 0");
  AssocResult res;
  if (rho == 0.0) return res;
  double lr = std::log(rho);
  auto f = [&](int p) { return p * lr - W.logM[p]; };
  int best = 0;
  double val = 0.0;
  if (W.log_convex) {
    int guess = int(std::lower_bound(W.logm.begin(), W.logm.end(), lr) - W.logm.begin());
    int lo = std::max(0, guess - 1), hi = std::min(W.pmax, guess + 1);
    best = lo;
    val = f(lo);
    for (int p = lo + 1; p <= hi; ++p)
      if (f(p) > val) {
        val = f(p);
        best = p;
      }
  } else {
    for (int p = 1; p <= W.pmax; ++p)
      if (f(p) > val) {
        val = f(p);
        best = p;
      }
  }
  res.value = val;
  res.argmax = best;
  res.saturated = best == W.pmax;
  return res;
}

double assoc(const WeightSequence& W, double rho) { return assoc_full(W, rho).value; }

}  // namespace udsg
