#pragma once

// Integration against Gaussian damping: scaled Gauss-Hermite tensor rules for
// ∫ f(y) e^{-γ|y|^2} dy over R^n (n <= 2) and composite Simpson on a box.

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "colombeau/core.hpp"
#include "colombeau/parallel.hpp"

namespace colombeau {

enum class RuleKind { gauss_hermite, trapezoid_box };

struct QuadratureRule {
  std::vector<double> nodes;
  // ∫ f(z) e^{-z^2} dz ≈ Σ weights[i] f(nodes[i]) for gauss_hermite,
  // ∫ f ≈ Σ weights[i] f(nodes[i]) for trapezoid_box.
  std::vector<double> weights;
  // weights[i] e^{nodes[i]^2} for gauss_hermite (always finite, while the
  // outer weights underflow for m > ~360); equal to weights for the box rule.
  std::vector<double> scaled_weights;
  RuleKind kind = RuleKind::gauss_hermite;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kMaxGaussHermiteNodes = 512;

// Roots of H_m by Newton iteration on the orthonormal recurrence.
// Exact for polynomials of degree <= 2m - 1. 1 <= m <= 512.
QuadratureRule gauss_hermite(int m);

// Shared, lazily built rule; safe to call concurrently.
const QuadratureRule& gauss_hermite_cached(int m);

// Composite Simpson on [-R, R] with `intervals` subintervals (rounded up to even).
QuadratureRule simpson_rule(double half_width, int intervals);

using Integrand = std::function<double(std::span<const double>)>;

struct DampedOptions {
  int nodes = 64;
  // Gauss-Hermite scale s: nodes are placed at t_i / sqrt(s). A value <= 0
  // selects γ + the integrand's Gaussian decay rate.
  double scale = 0.0;
  // Repeat with 2 * nodes and report |I_2m - I_m|.
  bool estimate_error = false;
  double relative_tolerance = 1e-8;
  parallel::Execution execution = parallel::default_execution();
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
  int nodes = 0;
  double scale = 0.0;
};

// ∫_{R^n} f(y) e^{-γ|y|^2} dy with y = t / sqrt(s):
//   s^{-n/2} Σ W_i f(t_i/√s) e^{-γ|t_i|^2/s},  W_i = scaled weights.
// `decay` is the known Gaussian decay rate of f (0 when unknown).
// Throws EvaluationError naming the node when f is not finite there.
QuadratureResult integrate_damped(const Integrand& f, std::size_t dimension, double gamma,
                                  double decay, const DampedOptions& options = {});
QuadratureResult integrate_damped(const ScalarField& f, double gamma,
                                  const DampedOptions& options = {});
// Plain value with m nodes per axis and the default scale.
double integrate_damped(const ScalarField& f, double gamma, int nodes);

struct BoxQuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |S_2m - S_m|
  bool boundary_warning = false;  // |f(±R)| >= 1e-12
};

// ∫_{-R}^{R} f(x) dx by composite Simpson with m and 2m intervals (n = 1).
BoxQuadratureResult integrate_box(const ScalarField& f, const SamplingBox& box, int intervals);

}  // namespace colombeau
