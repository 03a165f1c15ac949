#include "colombeau/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "colombeau/detail/hermite_recurrence.hpp"
#include "colombeau/errors.hpp"
#include "colombeau/fit.hpp"
#include "colombeau/parallel.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

namespace {

// Coefficients of d/dx Σ c_n h_n, using h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}.
std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double dn = static_cast<double>(n);
    if (n > 0) out[n - 1] += std::sqrt(dn / 2.0) * c[n];
    out[n + 1] -= std::sqrt((dn + 1.0) / 2.0) * c[n];
  }
  return out;
}

double synthesize_raw(const std::vector<double>& c, double x) noexcept {
  if (c.empty()) return 0.0;
  double prev = 0.0;
  double cur = detail::hermite_h0(x);
  double sum = c[0] * cur;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    const double dk = static_cast<double>(k);
    const double next = x * std::sqrt(2.0 / (dk + 1.0)) * cur - std::sqrt(dk / (dk + 1.0)) * prev;
    prev = cur;
    cur = next;
    sum += c[k + 1] * cur;
  }
  return sum;
}

ScalarField field_from_coefficients(std::vector<double> c) {
  auto coeffs = std::make_shared<const std::vector<double>>(std::move(c));
  ScalarField f(
      1, [coeffs](std::span<const double> x) { return synthesize_raw(*coeffs, x[0]); },
      [coeffs](const MultiIndex& a, std::span<const double> x) {
        std::vector<double> d = *coeffs;
        for (int k = 0; k < a[0]; ++k) d = differentiate(d);
        return synthesize_raw(d, x[0]);
      });
  return f.with_gaussian_decay(0.5);
}

double associated_at(const WeightSequence& M, double h, std::size_t n, DampingExponent mode,
                     bool* truncated) {
  const double rho = mode == DampingExponent::square_of_value
                         ? std::sqrt(static_cast<double>(n)) * h
                         : static_cast<double>(n) * h * h;
  const AssociatedValue v = associated_function(M, rho);
  if (truncated != nullptr && v.truncated && n > 0) *truncated = true;
  return v.value;
}

}  // namespace

double hermite_function(int n, double x) {
  if (n < 0 || n > kMaxHermiteIndex) {
    throw CapabilityError("Hermite index must lie in [0, 256], got " + std::to_string(n));
  }
  return detail::hermite_pair(n, x).first;
}

std::vector<double> hermite_functions(int n_max, double x) {
  if (n_max < 0 || n_max > kMaxHermiteIndex) {
    throw CapabilityError("Hermite index must lie in [0, 256], got " + std::to_string(n_max));
  }
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  double prev = 0.0;
  double cur = detail::hermite_h0(x);
  out[0] = cur;
  for (int k = 0; k < n_max; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    out[static_cast<std::size_t>(k) + 1] = cur;
  }
  return out;
}

ScalarField hermite_field(int n) {
  if (n < 0 || n > kMaxHermiteIndex) {
    throw CapabilityError("Hermite index must lie in [0, 256], got " + std::to_string(n));
  }
  return field_from_coefficients(HermiteExpansion::unit(static_cast<std::size_t>(n),
                                                        static_cast<std::size_t>(n) + 1)
                                     .coefficients);
}

HermiteExpansion::HermiteExpansion(std::vector<double> b) : coefficients(std::move(b)) {
  for (double v : coefficients) {
    if (!std::isfinite(v)) throw DomainError("Hermite coefficients must be finite");
  }
}

HermiteExpansion HermiteExpansion::unit(std::size_t index, std::size_t length) {
  std::vector<double> b(std::max(length, index + 1), 0.0);
  b[index] = 1.0;
  return HermiteExpansion(std::move(b));
}

ExpansionResult expand(const ScalarField& f, int N, int nodes) {
  if (f.dimension() != 1) throw CapabilityError("Hermite expansion is one-dimensional");
  if (N < 0 || N > kMaxHermiteIndex) {
    throw CapabilityError("expansion length must lie in [0, 256], got " + std::to_string(N));
  }
  ExpansionResult result;
  result.half_width = std::max(10.0, std::sqrt(2.0 * N + 1.0) + 8.0);
  const QuadratureRule rule = simpson_rule(result.half_width, nodes);

  std::vector<double> values(rule.size());
  parallel::fill(values, [&](std::size_t i) {
    const double x = rule.nodes[i];
    return f.eval_unchecked(std::span<const double>(&x, 1));
  });

  std::vector<double> b(static_cast<std::size_t>(N) + 1, 0.0);
  double energy = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double wf = rule.weights[i] * values[i];
    if (wf == 0.0) continue;
    energy += wf * values[i];
    const std::vector<double> hs = hermite_functions(N, rule.nodes[i]);
    for (std::size_t n = 0; n < b.size(); ++n) b[n] += wf * hs[n];
  }
  double captured = 0.0;
  for (double v : b) captured += v * v;
  result.tail_energy = std::max(0.0, energy - captured);
  result.boundary_flag = !(std::abs(values.front()) < 1e-12 && std::abs(values.back()) < 1e-12);
  result.expansion = HermiteExpansion(std::move(b));
  return result;
}

double synthesize(const HermiteExpansion& e, double x) { return synthesize_raw(e.coefficients, x); }

ScalarField synthesize_field(const HermiteExpansion& e) {
  return field_from_coefficients(e.coefficients);
}

DecayCheckReport coefficient_decay_check(const HermiteExpansion& e, const WeightSequence& M,
                                         double h, BoundDirection direction) {
  if (!(h > 0.0)) throw DomainError("h must be positive");
  DecayCheckReport report;
  report.direction = direction;
  report.h = h;
  const std::size_t count = e.size();
  report.margins.resize(count);
  const double sign = direction == BoundDirection::growth ? 1.0 : -1.0;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> excess(count, -inf);
  report.log_constant = -inf;
  report.margin_min = inf;
  report.margin_max = -inf;
  for (std::size_t n = 0; n < count; ++n) {
    const double bound = sign * associated_at(M, h, n, DampingExponent::square_of_value, nullptr);
    const double magnitude = std::abs(e.coefficients[n]);
    const double log_b = magnitude > 0.0 ? std::log(magnitude) : -inf;
    excess[n] = log_b - bound;
    report.margins[n] = bound - log_b;
    report.margin_min = std::min(report.margin_min, report.margins[n]);
    report.margin_max = std::max(report.margin_max, report.margins[n]);
    if (excess[n] > report.log_constant) {
      report.log_constant = excess[n];
      report.worst_index = n;
    }
  }
  report.holds_with_unit_constant = report.log_constant <= 1e-12;

  const std::size_t mid = count / 2;
  double head = -inf;
  double tail = -inf;
  for (std::size_t n = 0; n < count; ++n) {
    if (n < mid) {
      head = std::max(head, excess[n]);
    } else {
      tail = std::max(tail, excess[n]);
    }
  }
  report.pass = count < 2 || tail == -inf || tail <= head + 1e-9;
  return report;
}

std::vector<double> damping_factors(std::size_t count, const WeightSequence& M, double h,
                                    double eps, DampingExponent mode) {
  if (!(h > 0.0)) throw DomainError("h must be positive");
  std::vector<double> factors(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double m = associated_at(M, h, n, mode, nullptr);
    const double exponent = mode == DampingExponent::square_of_value ? m * m : m;
    factors[n] = std::exp(-eps * exponent);
  }
  return factors;
}

FunctionNet regularize_ultra(const HermiteExpansion& e, const WeightSequence& M, double h,
                             const EpsilonGrid& grid, DampingExponent mode) {
  return FunctionNet::generate(grid, [&](double eps) {
    const std::vector<double> factors = damping_factors(e.size(), M, h, eps, mode);
    std::vector<double> damped(e.size());
    for (std::size_t n = 0; n < e.size(); ++n) damped[n] = factors[n] * e.coefficients[n];
    return field_from_coefficients(std::move(damped));
  });
}

InclusionBoundReport verify_inclusion_bound(const HermiteExpansion& e, const WeightSequence& M,
                                            double h, const EpsilonGrid& grid,
                                            DampingExponent mode) {
  InclusionBoundReport report;
  report.growth_check_passed = coefficient_decay_check(e, M, h, BoundDirection::growth).pass;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> bound(e.size());
  for (std::size_t n = 0; n < e.size(); ++n) {
    bound[n] = associated_at(M, h, n, DampingExponent::square_of_value, &report.truncated);
  }
  std::vector<double> constants;
  for (double eps : grid.values()) {
    const std::vector<double> factors = damping_factors(e.size(), M, h, eps, mode);
    double log_c = -inf;
    for (std::size_t n = 0; n < e.size(); ++n) {
      const double magnitude = std::abs(factors[n] * e.coefficients[n]);
      if (magnitude == 0.0) continue;
      const double log_f = std::log(magnitude);
      log_c = std::max(log_c, log_f + bound[n]);
      if (log_f > bound[n] + 1e-12 * std::max(1.0, std::abs(bound[n]))) {
        if (report.violations == 0) {
          report.violation_index = static_cast<long>(n);
          report.violation_eps = eps;
        }
        ++report.violations;
      }
    }
    report.eps.push_back(eps);
    report.log_constants.push_back(log_c);
    constants.push_back(log_c == -inf ? 0.0 : std::exp(log_c));
  }
  report.uniform_bound_holds = report.violations == 0;
  const PowerFit fit = fit_power_law(report.eps, constants, grid.fine_half_begin(), grid.size());
  report.slope = fit.slope;
  report.r2 = fit.r2;
  return report;
}

}  // namespace colombeau
