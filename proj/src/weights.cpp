#include "colombeau/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "colombeau/errors.hpp"

namespace colombeau {

namespace {

constexpr double kLogTolerance = 1e-12;
constexpr int kMaxPowerOfTwo = 40;

double log_factorial(std::size_t p) { return std::lgamma(static_cast<double>(p) + 1.0); }

AssociatedValue sup_over_sequence(const std::vector<double>& log_values, double rho) {
  if (rho < 0.0 || std::isnan(rho)) throw DomainError("associated function needs ρ >= 0");
  if (rho == 0.0) return {0.0, 0, false};
  const double log_rho = std::log(rho);
  AssociatedValue best{-std::numeric_limits<double>::infinity(), 0, false};
  for (std::size_t p = 0; p < log_values.size(); ++p) {
    const double term = static_cast<double>(p) * log_rho - log_values[p];
    if (term > best.value) best = {term, p, false};
  }
  best.truncated = best.argmax + 1 == log_values.size();
  return best;
}

}  // namespace

WeightSequence::WeightSequence(std::string name, std::vector<double> log_values)
    : name_(std::move(name)), log_values_(std::move(log_values)) {
  if (log_values_.size() < 17) throw DomainError("weight sequence needs P_max >= 16");
  if (log_values_.front() != 0.0) throw DomainError("weight sequence must have M_0 = 1");
  for (double v : log_values_) {
    if (!std::isfinite(v)) throw DomainError("weight sequence entries must be finite");
  }
}

WeightSequence WeightSequence::starred() const {
  std::vector<double> logs(log_values_.size());
  for (std::size_t p = 0; p < logs.size(); ++p) logs[p] = log_values_[p] - log_factorial(p);
  return WeightSequence(name_ + "*", std::move(logs));
}

WeightSequence gevrey(double s, std::size_t max_index) {
  if (!(s >= 1.0) || !std::isfinite(s)) throw DomainError("gevrey exponent must satisfy s >= 1");
  std::vector<double> logs(max_index + 1);
  for (std::size_t p = 0; p <= max_index; ++p) logs[p] = s * log_factorial(p);
  char label[48];
  std::snprintf(label, sizeof label, "gevrey(%g)", s);
  return WeightSequence(label, std::move(logs));
}

ConditionReport check_conditions(const WeightSequence& M) {
  const auto& L = M.log_values();
  const std::size_t P = M.max_index();
  if (P < 4) throw DomainError("condition checks need P_max >= 4");
  ConditionReport report;

  // log-convexity
  report.m1.holds = true;
  report.m1.printed_form = true;
  for (std::size_t p = 1; p < P; ++p) {
    const double slack = kLogTolerance * std::max(1.0, std::abs(L[p]));
    if (2.0 * L[p] > L[p - 1] + L[p + 1] + slack && report.m1.holds) {
      report.m1.holds = false;
      report.m1.first_violation = static_cast<int>(p);
    }
    if (2.0 * L[p] > 2.0 * L[p - 1] + slack) report.m1.printed_form = false;
  }

  // stability: the least log c needed for a given H is
  // max_{q<=p} (L_p - p ln H - L_q - L_{p-q}).
  for (int h_exp = 0; h_exp <= kMaxPowerOfTwo && !report.m2.holds; ++h_exp) {
    const double log_h = h_exp * std::numbers::ln2;
    double needed = 0.0;
    for (std::size_t p = 0; p <= P; ++p) {
      for (std::size_t q = 0; q <= p; ++q) {
        needed = std::max(needed, L[p] - static_cast<double>(p) * log_h - L[q] - L[p - q]);
      }
    }
    const double c_exp = std::max(0.0, std::ceil(needed / std::numbers::ln2 - 1e-9));
    if (c_exp <= kMaxPowerOfTwo) {
      report.m2 = {true, std::exp2(c_exp), std::exp2(h_exp)};
    }
  }

  // summability: partial sum plus a power-law tail fitted on the last quarter.
  double sum = 0.0;
  for (std::size_t p = 1; p <= P; ++p) sum += std::exp(L[p - 1] - L[p]);
  report.m3.partial_sum = sum;
  const std::size_t lo = std::max<std::size_t>(1, P - P / 4);
  const double t_lo = L[lo - 1] - L[lo];
  const double t_hi = L[P - 1] - L[P];
  const double a = -(t_hi - t_lo) / (std::log(static_cast<double>(P)) - std::log(static_cast<double>(lo)));
  report.m3.decay_exponent = a;
  report.m3.converged = a > 1.05;
  if (report.m3.converged) {
    // Σ_{p>P} C p^{-a} ≈ ∫_{P+1/2}^∞ C x^{-a} dx with C = t_P P^a.
    const double c = std::exp(t_hi) * std::pow(static_cast<double>(P), a);
    report.m3.tail_estimate = c * std::pow(static_cast<double>(P) + 0.5, 1.0 - a) / (a - 1.0);
    report.m3.limit_estimate = sum + report.m3.tail_estimate;
  } else {
    report.m3.tail_estimate = std::numeric_limits<double>::infinity();
    report.m3.limit_estimate = std::numeric_limits<double>::infinity();
  }
  return report;
}

AssociatedValue associated_function(const WeightSequence& M, double rho) {
  return sup_over_sequence(M.log_values(), rho);
}

AssociatedValue growth_function(const WeightSequence& M, double rho) {
  return sup_over_sequence(M.starred().log_values(), rho);
}

}  // namespace colombeau
