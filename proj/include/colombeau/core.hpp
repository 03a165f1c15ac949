#pragma once

// Value types for smooth fields on R^d, ε-indexed nets of them, multi-indices,
// finite sampling boxes and the Gaussian damping used by every regularisation.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace colombeau {

using Point = std::vector<double>;

// α ∈ N^d. Entries are nonnegative; order() is |α|.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex zero(std::size_t dimension);

  std::size_t dimension() const noexcept { return entries_.size(); }
  int order() const noexcept { return order_; }
  int operator[](std::size_t axis) const { return entries_[axis]; }
  const std::vector<int>& entries() const noexcept { return entries_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

// Every α of dimension d with |α| <= max_order, graded then lexicographic.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dimension, int max_order);

// Smooth map R^d -> R with optional exact derivatives. Copies share state and
// the evaluators must be pure: fields are evaluated from many threads.
class ScalarField {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using DerivativeEvaluator = std::function<double(const MultiIndex&, std::span<const double>)>;

  ScalarField(std::size_t dimension, Evaluator evaluator);
  ScalarField(std::size_t dimension, Evaluator evaluator, DerivativeEvaluator derivative);

  std::size_t dimension() const noexcept;
  bool analytic() const noexcept;

  // Rate a >= 0 such that |f(x)| is bounded by a polynomial times e^{-a|x|^2}.
  // Quadrature uses it to choose the Gauss-Hermite scale; 0 means unknown.
  double gaussian_decay() const noexcept;
  ScalarField with_gaussian_decay(double rate) const;

  double operator()(std::span<const double> x) const;
  double operator()(std::initializer_list<double> x) const;

  // Exact derivative; throws CapabilityError when the field is not analytic.
  double derivative(const MultiIndex& alpha, std::span<const double> x) const;

  // Unchecked evaluation for hot loops that already validated the shape.
  double eval_unchecked(std::span<const double> x) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

// Common fields. All carry exact derivatives.
ScalarField constant_field(std::size_t dimension, double value);
// amplitude * e^{-rate |x|^2}; rate may be negative (e^{|x|^2} growth).
ScalarField gaussian_field(std::size_t dimension, double amplitude, double rate);
// Σ_k c_k x^k on the real line.
ScalarField polynomial_field(std::vector<double> coefficients);
// Σ_k c_k |x|^{2k} on R^d (exact derivatives for d = 1 only).
ScalarField radial_polynomial_field(std::size_t dimension, std::vector<double> coefficients);

ScalarField scale(double factor, const ScalarField& f);
// Pointwise product; derivatives by the Leibniz rule when both are analytic.
ScalarField multiply(const ScalarField& f, const ScalarField& g);
ScalarField add(const ScalarField& f, const ScalarField& g);

struct DerivativeOptions {
  double step = 1e-4;  // base step, scaled by (1 + |x|)
  int max_order = 4;
};

struct DerivativeResult {
  double value = 0.0;
  double step = 0.0;  // finite-difference step actually used, 0 when exact
  bool exact = false;
};

// ∂^α f(x): exact when f is analytic, otherwise central differences of second
// order per axis. For |α| > 2 the step is widened to step^{2/|α|} to keep
// cancellation error below truncation error.
DerivativeResult partial_derivative(const ScalarField& f, const MultiIndex& alpha,
                                    std::span<const double> x,
                                    const DerivativeOptions& options = {});

// f(x) e^{-γ|x|^2}.
ScalarField gaussian_damp(const ScalarField& f, double gamma);

// Strictly decreasing ε values in (0, 1], at least four of them.
class EpsilonGrid {
 public:
  explicit EpsilonGrid(std::vector<double> values);

  // ε_k = first * ratio^{k-1}, k = 1..levels. Default: 2^{-k}, k = 1..12.
  static EpsilonGrid geometric(std::size_t levels = 12, double first = 0.5, double ratio = 0.5);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

  // Index of ε on the grid (relative match 1e-12); GridError otherwise.
  std::size_t index_of(double eps) const;
  bool contains(double eps) const noexcept;

  // First index of the fit window: the finest ⌈size/2⌉ points.
  std::size_t fine_half_begin() const noexcept { return size() / 2; }

  friend bool operator==(const EpsilonGrid&, const EpsilonGrid&) = default;

 private:
  std::vector<double> values_;
};

// (f_ε)_ε sampled on a finite ε-grid; every field shares one dimension.
class FunctionNet {
 public:
  FunctionNet(EpsilonGrid grid, std::vector<ScalarField> fields);

  template <class Generator>
  static FunctionNet generate(const EpsilonGrid& grid, Generator&& make_field) {
    std::vector<ScalarField> fields;
    fields.reserve(grid.size());
    for (double eps : grid.values()) fields.push_back(make_field(eps));
    return FunctionNet(grid, std::move(fields));
  }

  const EpsilonGrid& grid() const noexcept { return grid_; }
  std::size_t dimension() const noexcept { return fields_.front().dimension(); }
  const ScalarField& field(double eps) const { return fields_[grid_.index_of(eps)]; }
  const ScalarField& field_at(std::size_t index) const { return fields_.at(index); }
  const std::vector<ScalarField>& fields() const noexcept { return fields_; }

 private:
  EpsilonGrid grid_;
  std::vector<ScalarField> fields_;
};

// (C_ε)_ε, a net of real numbers.
class GeneralizedConstantNet {
 public:
  GeneralizedConstantNet(EpsilonGrid grid, std::vector<double> values);

  const EpsilonGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double at(double eps) const { return values_[grid_.index_of(eps)]; }

 private:
  EpsilonGrid grid_;
  std::vector<double> values_;
};

// f_ε(x); GridError if ε is off-grid, ShapeError on dimension mismatch.
double evaluate(const FunctionNet& net, double eps, std::span<const double> x);

// f_ε ↦ f_ε e^{-ε|x|^2}.
FunctionNet double_regularize(const FunctionNet& net);

// Uniform lattice on [-R, R]^d used to truncate sups over R^d.
struct SamplingBox {
  double half_width = 8.0;
  int points_per_axis = 161;

  void validate() const;
  std::size_t point_count(std::size_t dimension) const;
  // Writes the coordinates of lattice point `index` into `out` (size d).
  void point(std::size_t index, std::span<double> out) const;
  // True on the outermost 10% shell: max_i |x_i| >= 0.9 R.
  bool on_boundary_shell(std::span<const double> x) const noexcept;
};

double euclidean_norm(std::span<const double> x) noexcept;

std::string describe_point(std::span<const double> x);

}  // namespace colombeau
