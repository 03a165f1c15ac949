#include "colombeau/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "colombeau/detail/hermite_recurrence.hpp"
#include "colombeau/errors.hpp"

namespace colombeau {

QuadratureRule gauss_hermite(int m) {
  if (m < 1 || m > kMaxGaussHermiteNodes) {
    throw CapabilityError("Gauss-Hermite node count must lie in [1, 512], got " + std::to_string(m));
  }
  const auto size = static_cast<std::size_t>(m);
  std::vector<double> roots(size);
  std::vector<double> scaled(size);

  // Positive roots, largest first, with the classical asymptotic starting guesses.
  const int half = (m + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[static_cast<std::size_t>(i - 2)];
    }
    if (m % 2 == 1 && i == half - 1) {
      z = 0.0;
    } else {
      for (int iter = 0; iter < 100; ++iter) {
        const auto [hm, hm1] = detail::hermite_pair(m, z);
        const double derivative = std::sqrt(2.0 * m) * hm1 - z * hm;
        const double step = hm / derivative;
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
      }
    }
    const double hm1 = detail::hermite_pair(m - 1, z).first;
    const double w = 1.0 / (m * hm1 * hm1);
    roots[static_cast<std::size_t>(i)] = z;
    scaled[static_cast<std::size_t>(i)] = w;
  }

  QuadratureRule rule;
  rule.kind = RuleKind::gauss_hermite;
  rule.nodes.resize(size);
  rule.scaled_weights.resize(size);
  rule.weights.resize(size);
  for (int i = 0; i < half; ++i) {
    const auto hi = static_cast<std::size_t>(m - 1 - i);
    const auto lo = static_cast<std::size_t>(i);
    rule.nodes[hi] = roots[lo];
    rule.nodes[lo] = -roots[lo];
    rule.scaled_weights[hi] = scaled[lo];
    rule.scaled_weights[lo] = scaled[lo];
  }
  for (std::size_t i = 0; i < size; ++i) {
    rule.weights[i] = rule.scaled_weights[i] * std::exp(-rule.nodes[i] * rule.nodes[i]);
  }
  return rule;
}

const QuadratureRule& gauss_hermite_cached(int m) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<const QuadratureRule>(gauss_hermite(m));
  return *slot;
}

QuadratureRule simpson_rule(double half_width, int intervals) {
  if (!(half_width > 0.0)) throw DomainError("Simpson rule needs a positive half-width");
  if (intervals < 2) intervals = 2;
  if (intervals % 2 == 1) ++intervals;
  const auto n = static_cast<std::size_t>(intervals);
  const double h = 2.0 * half_width / intervals;
  QuadratureRule rule;
  rule.kind = RuleKind::trapezoid_box;
  rule.nodes.resize(n + 1);
  rule.weights.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    rule.nodes[i] = (2.0 * static_cast<double>(i) - static_cast<double>(n)) * 0.5 * h;
    const double factor = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    rule.weights[i] = factor * h / 3.0;
  }
  rule.scaled_weights = rule.weights;
  return rule;
}

namespace {

double tensor_sum(const Integrand& f, std::size_t dimension, double gamma, double scale,
                  int nodes, parallel::Execution exec) {
  const QuadratureRule& rule = gauss_hermite_cached(nodes);
  const std::size_t m = rule.size();
  const std::size_t total = dimension == 1 ? m : m * m;
  const double inv_sqrt_scale = 1.0 / std::sqrt(scale);
  std::vector<double> terms(total);
  parallel::fill(
      terms,
      [&](std::size_t k) {
        double y[2];
        double weight = 1.0;
        double r2 = 0.0;
        std::size_t idx = k;
        for (std::size_t axis = 0; axis < dimension; ++axis) {
          const std::size_t j = idx % m;
          idx /= m;
          y[axis] = rule.nodes[j] * inv_sqrt_scale;
          weight *= rule.scaled_weights[j];
          r2 += y[axis] * y[axis];
        }
        const std::span<const double> point(y, dimension);
        const double value = f(point);
        if (!std::isfinite(value)) {
          throw EvaluationError("integrand is not finite at node " + describe_point(point));
        }
        if (value == 0.0) return 0.0;
        return weight * value * std::exp(-gamma * r2);
      },
      exec);
  return parallel::ordered_sum(terms) * std::pow(scale, -0.5 * static_cast<double>(dimension));
}

}  // namespace

QuadratureResult integrate_damped(const Integrand& f, std::size_t dimension, double gamma,
                                  double decay, const DampedOptions& options) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("damping rate γ must be positive");
  if (dimension == 0 || dimension > 2) {
    throw CapabilityError("damped quadrature supports dimensions 1 and 2 only");
  }
  const double scale = options.scale > 0.0 ? options.scale : gamma + std::max(decay, 0.0);
  QuadratureResult result;
  result.nodes = options.nodes;
  result.scale = scale;
  result.value = tensor_sum(f, dimension, gamma, scale, options.nodes, options.execution);
  if (options.estimate_error) {
    const int doubled = std::min(2 * options.nodes, kMaxGaussHermiteNodes);
    const double refined = tensor_sum(f, dimension, gamma, scale, doubled, options.execution);
    result.error_estimate = std::abs(refined - result.value);
    const double magnitude = std::max(std::abs(refined), std::abs(result.value));
    result.converged = result.error_estimate <= options.relative_tolerance * magnitude;
    result.value = refined;
    result.nodes = doubled;
  }
  return result;
}

QuadratureResult integrate_damped(const ScalarField& f, double gamma, const DampedOptions& options) {
  return integrate_damped([&f](std::span<const double> y) { return f.eval_unchecked(y); },
                          f.dimension(), gamma, f.gaussian_decay(), options);
}

double integrate_damped(const ScalarField& f, double gamma, int nodes) {
  DampedOptions options;
  options.nodes = nodes;
  return integrate_damped(f, gamma, options).value;
}

BoxQuadratureResult integrate_box(const ScalarField& f, const SamplingBox& box, int intervals) {
  box.validate();
  if (f.dimension() != 1) throw CapabilityError("box quadrature is one-dimensional");
  auto simpson = [&f](const QuadratureRule& rule) {
    std::vector<double> terms(rule.size());
    parallel::fill(terms, [&](std::size_t i) {
      const double x = rule.nodes[i];
      return rule.weights[i] * f.eval_unchecked(std::span<const double>(&x, 1));
    });
    return parallel::ordered_sum(terms);
  };
  BoxQuadratureResult result;
  const double coarse = simpson(simpson_rule(box.half_width, intervals));
  result.value = simpson(simpson_rule(box.half_width, 2 * intervals));
  result.error_estimate = std::abs(result.value - coarse);
  const double left = f({-box.half_width});
  const double right = f({box.half_width});
  result.boundary_warning = !(std::abs(left) < 1e-12 && std::abs(right) < 1e-12);
  return result;
}

}  // namespace colombeau
