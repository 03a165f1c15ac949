#pragma once

// Weight sequences M_p (stored as log M_p), the structural conditions
// (log-convexity, stability, summability), the associated function M(ρ) and the growth function M*(ρ).

#include <string>
#include <vector>

namespace colombeau {

class WeightSequence {
 public:
  // log_values[p] = log M_p, p = 0..P_max. Requires log M_0 = 0, finite
  // entries and P_max >= 16.
  WeightSequence(std::string name, std::vector<double> log_values);

  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& log_values() const noexcept { return log_values_; }
  double log_at(std::size_t p) const { return log_values_.at(p); }
  std::size_t max_index() const noexcept { return log_values_.size() - 1; }

  // Sequence M*_p = M_p / p!.
  WeightSequence starred() const;

 private:
  std::string name_;
  std::vector<double> log_values_;
};

inline constexpr std::size_t kDefaultWeightLength = 64;

// M_p = (p!)^s, s >= 1.
WeightSequence gevrey(double s, std::size_t max_index = kDefaultWeightLength);

struct LogConvexity {
  bool holds = false;          // M_p^2 <= M_{p-1} M_{p+1} for every interior p
  int first_violation = -1;
  bool printed_form = false;   // M_p^2 <= M_{p-1} M_{p-1} as typeset, reported only
};

struct StabilityCondition {
  bool holds = false;
  double c = 0.0;  // smallest power of two that works for the chosen H
  double H = 0.0;  // smallest power of two for which some c <= 2^max_exponent works
};

struct SummabilityEstimate {
  double partial_sum = 0.0;     // Σ_{p=1}^{P_max} M_{p-1}/M_p
  bool converged = false;       // terms decay faster than 1/p
  double tail_estimate = 0.0;   // estimated Σ_{p>P_max}, +inf when divergent
  double limit_estimate = 0.0;  // partial_sum + tail_estimate
  double decay_exponent = 0.0;  // a in M_{p-1}/M_p ~ C p^{-a}, fitted on the last terms
};

struct ConditionReport {
  LogConvexity m1;
  StabilityCondition m2;
  SummabilityEstimate m3;
};

// Needs P_max >= 4. The stability search runs over H, c ∈ {1, 2, 4, ..., 2^40}.
ConditionReport check_conditions(const WeightSequence& M);

struct AssociatedValue {
  double value = 0.0;
  std::size_t argmax = 0;
  bool truncated = false;  // sup attained at P_max: the true value may be larger
};

// M(ρ) = sup_p (p ln ρ - ln M_p), brute force over p = 0..P_max. ρ = 0 is
// accepted as the limit ρ -> 0+, where the p = 0 term gives 0.
AssociatedValue associated_function(const WeightSequence& M, double rho);

// M*(ρ): the associated function of M*_p = M_p / p!.
AssociatedValue growth_function(const WeightSequence& M, double rho);

}  // namespace colombeau
