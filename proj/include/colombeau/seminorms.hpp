#pragma once

// Sampled seminorms μ_{q,l} and ν_{h,M_p}, and classification of nets against
// the moderate / negligible conditions of the tempered and ultradistribution
// Colombeau algebras.

#include <optional>
#include <string>
#include <vector>

#include "colombeau/core.hpp"
#include "colombeau/parallel.hpp"
#include "colombeau/weights.hpp"

namespace colombeau {

// Highest exact derivative order requested from analytic fields.
inline constexpr int kAnalyticDerivativeCap = 16;

struct MuSpec {
  int q = 0;  // weight exponent; μ_{-q,l} has q < 0
  int l = 0;  // highest derivative order
};

struct NuSpec {
  NuSpec(double h, WeightSequence derivative_weights, int cap);
  NuSpec(double h, WeightSequence derivative_weights, WeightSequence monomial_weights, int cap);

  double h;
  WeightSequence derivative_weights;  // M_{|α|}
  WeightSequence monomial_weights;    // M_{|β|}
  int cap;                            // |α|, |β| <= cap
};

struct SeminormOptions {
  DerivativeOptions derivative{};
  parallel::Execution execution = parallel::default_execution();
};

struct SeminormValue {
  double value = 0.0;
  // The sampled sup is only attained on the outer 10% shell of the box.
  bool boundary_flag = false;
  Point argmax;
  int derivative_order = 0;  // |α| at the argmax
  int monomial_order = 0;    // |β| at the argmax (ν only)
};

// max_{|α| <= l} |∂^α f(x)| on every lattice point of the box; μ_{q,l} for
// any q is then a weighted max over the table.
class DerivativeSamples {
 public:
  static DerivativeSamples compute(const ScalarField& f, int l, const SamplingBox& box,
                                   const SeminormOptions& options = {});

  SeminormValue mu(int q) const;
  int max_order() const noexcept { return l_; }

 private:
  SamplingBox box_;
  std::size_t dimension_ = 1;
  int l_ = 0;
  std::vector<double> magnitude_;  // per lattice point
  std::vector<int> order_;         // |α| attaining it
  std::vector<double> norm_;       // |x|
};

SeminormValue mu_seminorm(const ScalarField& f, const MuSpec& spec, const SamplingBox& box,
                          const SeminormOptions& options = {});

// T[a][b] = max over lattice x, |α| = a, |β| = b of |x^β ∂^α f(x)|, so that
// ν_{h,M} = max_{a,b} h^{a+b} T[a][b] / (M_a M'_b).
class NuTable {
 public:
  static NuTable compute(const ScalarField& f, int cap, const SamplingBox& box,
                         const SeminormOptions& options = {});
  SeminormValue evaluate(const NuSpec& spec) const;
  // log ν, -inf for the zero field; stays finite where ν itself would overflow.
  double log_value(const NuSpec& spec) const;

 private:
  int cap_ = 0;
  std::vector<double> table_;  // (cap+1)^2, row a, column b
  std::vector<char> shell_;    // argmax of each cell on the boundary shell only
  std::vector<Point> argmax_;
};

SeminormValue nu_seminorm(const ScalarField& f, const NuSpec& spec, const SamplingBox& box,
                          const SeminormOptions& options = {});

enum class VerdictKind { moderate, negligible, neither, inconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::inconclusive;
  std::optional<int> order;  // n in moderate(n); empty for ultradistribution classes

  std::string to_string() const;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct GrowthOptions {
  double slope_tolerance = 0.25;
  double r2_threshold = 0.98;
  int p_max = 8;
  int q_max = 12;
  SeminormOptions seminorm{};
};

struct GrowthReport {
  std::vector<double> eps;
  std::vector<double> values;  // seminorm per ε
  double slope = 0.0;          // fitted growth order: value ~ ε^{-slope}
  double r2 = 0.0;
  Verdict verdict;
  bool boundary_flag = false;
  std::optional<int> q;
  std::vector<std::string> diagnostics;
};

// Verdict for an ε-series of seminorm values (grid order, coarse to fine).
// Shared by every classifier so that one rule decides moderate/negligible.
GrowthReport classify_series(std::span<const double> eps, std::span<const double> values,
                             bool boundary_flag, const GrowthOptions& options = {});

// μ_{q,l}(f_ε) = O(ε^{-n}) or O(ε^p) for all p <= p_max.
GrowthReport classify_power_growth(const FunctionNet& net, const MuSpec& spec,
                                   const SamplingBox& box, const GrowthOptions& options = {});

// Generalised constants (C_ε)_ε.
GrowthReport classify_constant(const GeneralizedConstantNet& net, const GrowthOptions& options = {});

// Smallest q <= q_max for which μ_{-q,l}(f_ε) is moderate (or negligible) with
// the sup attained inside the box.
GrowthReport classify_tempered(const FunctionNet& net, int l, const SamplingBox& box,
                               const GrowthOptions& options = {});

enum class UltraType { roumieu, beurling };

struct UltraOptions {
  std::vector<double> h_values{0.25, 0.5, 1.0, 2.0};
  std::vector<double> k_values{0.25, 0.5, 1.0, 2.0, 4.0};
  GrowthOptions growth{};
};

struct UltraCell {
  double h = 0.0;
  double k = 0.0;
  bool moderate_bound = false;  // log ν_h(f_ε) - N*(k/ε) bounded along the grid
  bool ideal_bound = false;     // log ν_h(f_ε) + N*(k/ε) bounded along the grid
};

struct UltraReport {
  GrowthReport growth;  // ν values at the witness h, verdict for the chosen type
  UltraType type = UltraType::roumieu;
  bool moderate = false;  // membership in E_{τ_R} / E_{τ_B}
  bool ideal = false;     // membership in N_{τ_R} / N_{τ_B}
  std::optional<double> witness_h;
  std::optional<double> witness_k;
  std::vector<UltraCell> cells;
  bool growth_function_truncated = false;
};

// N* is the growth function of N. Quantifiers: Roumieu ∃h ∃k (moderate),
// ∃h ∀k (ideal); Beurling ∀h ∃k (moderate), ∀h ∀k (ideal), over the tested grids.
UltraReport classify_ultra(const FunctionNet& net, const NuSpec& spec, const WeightSequence& N,
                           UltraType type, const SamplingBox& box, const UltraOptions& options = {});

}  // namespace colombeau
