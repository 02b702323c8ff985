// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

namespace udsg {

// Weight sequence (M_p), p = 0..pmax, held in log-space.
struct WeightSequence {
  int pmax = 0;
  std::vector<double> logM;  // log M_p, p = 0..pmax
  std::vector<double> m;     // m_p = M_p / M_{p-1}, stored at index p-1
  std::vector<double> logm;  // log m_p, same indexing
  std::optional<double> gevrey_index;
  bool log_convex = true;

  // m_p for p >= 1. Beyond pmax only the Gevrey closed form p^s is available.
  double ratio(long p) const;
  double log_ratio(long p) const;
  double log_weight(long p) const;
};

WeightSequence make_gevrey(double s, int pmax);
// Explicit table M_0..M_pmax with M_0 = 1 and all entries positive.
WeightSequence from_table(const std::vector<double>& M);
WeightSequence from_log_table(const std::vector<double>& logM);

struct ConditionReport {
  // (M.1) log-convexity: min over p of logM[p-1] + logM[p+1] - 2 logM[p].
  bool m1_pass = false;
  double m1_min_slack = 0.0;
  int m1_witness = -1;
  // (M.2) stability: M_{p+q} <= A H^{p+q} M_p M_q with H from the asymptotic slope.
  bool m2_pass = false;
  double m2_A = 0.0;
  double m2_H = 0.0;
  // (M.3)' surrogate: sum 1/m_p over the table plus an extrapolated tail.
  bool m3prime_pass = false;
  double m3prime_partial = 0.0;
  double m3prime_tail = 0.0;
  double growth_exponent = 0.0;  // fitted sigma in m_p ~ p^sigma
  // (M.3) surrogate: sup_p (m_p / p) sum_{q > p} 1/m_q.
  bool m3_pass = false;
  double m3_constant = 0.0;
};

ConditionReport verify_conditions(const WeightSequence& W);

struct AssocResult {
  double value = 0.0;
  int argmax = 0;
  bool saturated = false;  // argmax reached pmax: the table is too short for rho
};

// M(rho) = max_{0 <= p <= pmax} (p log rho - log M_p), ties toward smaller p.
AssocResult assoc_full(const WeightSequence& W, double rho);
double assoc(const WeightSequence& W, double rho);

// sum_{p > P} p^{-s}, s > 1.
double zeta_tail(double s, long P);

}  // namespace udsg
