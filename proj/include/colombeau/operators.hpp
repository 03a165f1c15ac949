#pragma once

// Generalised integral operators
//   (A φ)_ε(x) = ∫ K_ε(x, y) φ_ε(y) e^{-ε|y|^2} dy,
// their kernel composition, powers, the truncated exponential series and the
// growth checks on composed kernels.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colombeau/core.hpp"
#include "colombeau/quadrature.hpp"
#include "colombeau/seminorms.hpp"

namespace colombeau {

// Known Gaussian decay of a kernel in each argument; 0 when none.
struct KernelDecay {
  double in_x = 0.0;
  double in_y = 0.0;
};

// ε ↦ K_ε on R^{2n}; coordinates are (x_1..x_n, y_1..y_n).
class KernelNet {
 public:
  KernelNet(EpsilonGrid grid, std::size_t n, std::vector<ScalarField> kernels, KernelDecay decay = {});

  template <class Generator>
  static KernelNet generate(const EpsilonGrid& grid, std::size_t n, Generator&& make_kernel,
                            KernelDecay decay = {}) {
    std::vector<ScalarField> kernels;
    kernels.reserve(grid.size());
    for (double eps : grid.values()) kernels.push_back(make_kernel(eps));
    return KernelNet(grid, n, std::move(kernels), decay);
  }

  const EpsilonGrid& grid() const noexcept { return grid_; }
  std::size_t n() const noexcept { return n_; }
  const KernelDecay& decay() const noexcept { return decay_; }
  const ScalarField& kernel(double eps) const { return kernels_[grid_.index_of(eps)]; }
  const ScalarField& kernel_at(std::size_t i) const { return kernels_.at(i); }

  // K_ε(x, y).
  double operator()(double eps, std::span<const double> x, std::span<const double> y) const;

 private:
  EpsilonGrid grid_;
  std::size_t n_;
  std::vector<ScalarField> kernels_;
  KernelDecay decay_;
};

struct QuadratureSpec {
  int nodes = 64;  // Gauss-Hermite nodes per axis, >= 8
  std::string method = "gauss_hermite";
  // Recompute with doubled nodes and attach a warning when the relative
  // change exceeds relative_tolerance.
  bool check_convergence = false;
  double relative_tolerance = 1e-8;
};

class GeneralizedOperator {
 public:
  explicit GeneralizedOperator(KernelNet kernel, QuadratureSpec quadrature = {});

  const KernelNet& kernel() const noexcept { return *kernel_; }
  const QuadratureSpec& quadrature() const noexcept { return quadrature_; }
  std::size_t n() const noexcept { return kernel_->n(); }
  const EpsilonGrid& grid() const noexcept { return kernel_->grid(); }

 private:
  std::shared_ptr<const KernelNet> kernel_;
  QuadratureSpec quadrature_;
};

struct ApplyResult {
  double value = 0.0;
  double error_estimate = 0.0;  // node-doubling change, when checked
  std::optional<std::string> warning;
};

// (A φ)_ε(x) with the damping e^{-ε|y|^2} applied by the operator.
ApplyResult apply(const GeneralizedOperator& A, const FunctionNet& phi, double eps,
                  std::span<const double> x);
// Same, for a single field standing in for φ_ε.
ApplyResult apply(const GeneralizedOperator& A, const ScalarField& phi_eps, double eps,
                  std::span<const double> x);

// x ↦ (A φ)_ε(x) as a field (finite-difference derivatives).
ScalarField apply_field(const GeneralizedOperator& A, const ScalarField& phi_eps, double eps);
FunctionNet apply_net(const GeneralizedOperator& A, const FunctionNet& phi);

struct CompositionOptions {
  // Cache kernel values at exact query points. Nested quadratures revisit
  // the same node lattice, so this turns k-fold nesting into k m^{2n}
  // evaluations instead of m^{kn}.
  bool memoize = false;
};

// Kernel (x, y) ↦ ∫ K2_ε(x, z) K1_ε(z, y) e^{-ε|z|^2} dz, evaluated lazily.
GeneralizedOperator compose(const GeneralizedOperator& A2, const GeneralizedOperator& A1,
                            const CompositionOptions& options = {});

struct CompositionReport {
  double max_discrepancy = 0.0;  // max |lhs - rhs| / max(1, |lhs|, |rhs|)
  std::vector<Point> sample_points;
  std::vector<double> lhs;  // (A2∘A1) φ
  std::vector<double> rhs;  // A2 (A1 φ)
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> warnings;
};

CompositionReport verify_composition(const GeneralizedOperator& A2, const GeneralizedOperator& A1,
                                     const FunctionNet& phi, double eps,
                                     const std::vector<Point>& points, double tolerance);

struct PowerOptions {
  double budget = 1e6;  // limit on k * nodes^n
  std::optional<bool> memoize;  // default: memoize when k >= 3
};

// A^k as a left fold of compose; A^1 = A.
GeneralizedOperator power(const GeneralizedOperator& A, int k, const PowerOptions& options = {});

struct ExpReport {
  double value = 0.0;
  double identity_term = 0.0;     // φ_ε(x), undamped
  std::vector<double> terms;      // (A^k φ)_ε(x) / k!, k = 1..K
  std::vector<double> ratios;     // terms[k] / terms[k-1]
  int terms_used = 0;
  double last_term = 0.0;
  bool converged = false;         // some |term| < tol within K_max
};

// φ_ε(x) + Σ_{k=1}^{K} (A^k φ)_ε(x) / k!, stopping after the first term with
// magnitude below tol. Powers are applied as vectors on the quadrature
// lattice; A^k kernels are never formed.
ExpReport exp_apply(const GeneralizedOperator& A, const FunctionNet& phi, double eps,
                    std::span<const double> x, int k_max, double tol);

struct KernelGrowthOptions {
  bool include_derivatives = false;  // also first-order partials in x and y
  GrowthOptions growth{};
};

struct KernelGrowthReport {
  GrowthReport growth;
  int q1 = 0;
  int q2 = 0;
  double nominal_exponent = 0.0;    // (q1 + q2) / 2, ignoring the z-measure
  double corrected_exponent = 0.0;  // (q1 + q2 + n) / 2
  double margin_nominal = 0.0;      // nominal_exponent - slope
  double margin_corrected = 0.0;    // corrected_exponent - slope
  bool exceeds_nominal = false;
  bool within_corrected = false;
  std::string note;
};

// s(ε) = max over sampled (x, y) of (1+|x|)^{-q1} (1+|y|)^{-q2} |K_ε(x, y)|.
KernelGrowthReport kernel_growth_check(const GeneralizedOperator& A, int q1, int q2,
                                       const SamplingBox& box,
                                       const KernelGrowthOptions& options = {});

struct ModerationEntry {
  std::string name;
  int p = 0;        // output weight: μ_{-p,l}(A_ε(φ_ε e^{-ε|.|^2}))
  int q_prime = 0;  // input weight: μ_{-q',0}(φ_ε)
  std::vector<double> output_values;
  std::vector<double> input_values;
  std::vector<double> ratios;
  double ratio_slope = 0.0;
  Verdict ratio_verdict;
  Verdict output_verdict;
  bool boundary_flag = false;
};

struct ModerationReport {
  int l = 0;
  std::vector<double> eps;
  std::vector<ModerationEntry> entries;
};

ModerationReport operator_moderation_check(
    const GeneralizedOperator& A, const std::vector<std::pair<std::string, FunctionNet>>& catalog,
    int l, const SamplingBox& box, const GrowthOptions& options = {});

}  // namespace colombeau
