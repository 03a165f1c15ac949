#pragma once

// Orthonormal Hermite functions on the real line, expansion and synthesis,
// coefficient bounds against a weight sequence, and the Hermite-side
// regularisation f_ε = Σ e^{-ε M(√n h)^2} b_n h_n.

#include <string>
#include <vector>

#include "colombeau/core.hpp"
#include "colombeau/weights.hpp"

namespace colombeau {

inline constexpr int kMaxHermiteIndex = 256;

// h_n(x), 0 <= n <= 256.
double hermite_function(int n, double x);

// h_0(x) .. h_{n_max}(x) in one recurrence pass.
std::vector<double> hermite_functions(int n_max, double x);

// h_n as a field on R with exact derivatives (ladder relations).
ScalarField hermite_field(int n);

struct HermiteExpansion {
  std::vector<double> coefficients;  // b_0 .. b_N

  HermiteExpansion() = default;
  explicit HermiteExpansion(std::vector<double> b);

  std::size_t size() const noexcept { return coefficients.size(); }
  static HermiteExpansion unit(std::size_t index, std::size_t length);
};

struct ExpansionResult {
  HermiteExpansion expansion;
  double half_width = 0.0;     // integration range [-R, R]
  bool boundary_flag = false;  // f not negligible at ±R
  double tail_energy = 0.0;    // ∫ f^2 - Σ b_n^2, the L^2 mass beyond N
};

// b_n = ∫ f h_n dx for n = 0..N, by composite Simpson with `nodes`
// subintervals on [-R, R], R = max(10, sqrt(2N + 1) + 8).
ExpansionResult expand(const ScalarField& f, int N, int nodes = 4096);

// Σ b_n h_n(x), single recurrence pass.
double synthesize(const HermiteExpansion& e, double x);

// The synthesized function as a field with exact derivatives.
ScalarField synthesize_field(const HermiteExpansion& e);

enum class BoundDirection { decay, growth };

struct DecayCheckReport {
  BoundDirection direction = BoundDirection::growth;
  double h = 1.0;
  // bound_n - log|b_n| with bound_n = -M(√n h) (decay) or +M(√n h) (growth);
  // +inf where b_n = 0.
  std::vector<double> margins;
  double margin_min = 0.0;
  double margin_max = 0.0;
  double log_constant = 0.0;  // smallest log C with log|b_n| <= bound_n + log C
  std::size_t worst_index = 0;
  bool holds_with_unit_constant = false;
  // The excess log|b_n| - bound_n over the upper half of indices stays at or
  // below its maximum over the lower half, i.e. the bound holds with a
  // constant that does not grow with N.
  bool pass = false;
};

DecayCheckReport coefficient_decay_check(const HermiteExpansion& e, const WeightSequence& M,
                                         double h, BoundDirection direction);

// How M^2(√n h) is read: the square of the value (default) or M at (√n h)^2.
enum class DampingExponent { square_of_value, value_at_square };

// e^{-ε M(√n h)^2} for n = 0..count-1.
std::vector<double> damping_factors(std::size_t count, const WeightSequence& M, double h,
                                    double eps,
                                    DampingExponent mode = DampingExponent::square_of_value);

FunctionNet regularize_ultra(const HermiteExpansion& e, const WeightSequence& M, double h,
                             const EpsilonGrid& grid,
                             DampingExponent mode = DampingExponent::square_of_value);

struct InclusionBoundReport {
  std::vector<double> eps;
  std::vector<double> log_constants;  // log C_ε, C_ε = max_n |f^ε_n| e^{M(√n h)}
  double slope = 0.0;                 // ε-slope of C_ε (fitted on the finest half)
  double r2 = 0.0;
  bool growth_check_passed = false;   // precondition on the raw coefficients
  bool uniform_bound_holds = true;    // |f^ε_n| <= e^{M(√n h)} for all n, ε
  std::size_t violations = 0;
  long violation_index = -1;          // first witness (n, ε) when violated
  double violation_eps = 0.0;
  bool truncated = false;             // some M(√n h) hit the end of the sequence
};

InclusionBoundReport verify_inclusion_bound(const HermiteExpansion& e, const WeightSequence& M,
                                            double h, const EpsilonGrid& grid,
                                            DampingExponent mode = DampingExponent::square_of_value);

}  // namespace colombeau
