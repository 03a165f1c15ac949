#include "colombeau/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "colombeau/errors.hpp"

namespace colombeau {

namespace {

double squared_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// d^k/dt^k e^{-a t^2} = P_k(t) e^{-a t^2} with
// P_{k+1} = -2a t P_k - 2a k P_{k-1}, valid for any real a.
double gaussian_derivative_factor(int order, double rate, double t) noexcept {
  double prev = 1.0;
  if (order == 0) return prev;
  double cur = -2.0 * rate * t;
  for (int k = 1; k < order; ++k) {
    const double next = -2.0 * rate * t * cur - 2.0 * rate * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double binomial(int n, int k) noexcept {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Σ_j c_j j!/(j-k)! t^{j-k}
double polynomial_derivative(const std::vector<double>& c, int order, double t) noexcept {
  double acc = 0.0;
  for (auto j = static_cast<int>(c.size()) - 1; j >= order; --j) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= (j - i);
    acc = acc * t + c[static_cast<std::size_t>(j)] * falling;
  }
  return acc;
}

void require_dimension(const ScalarField& f, std::span<const double> x) {
  if (x.size() != f.dimension()) {
    throw ShapeError("point of dimension " + std::to_string(x.size()) +
                     " passed to a field of dimension " + std::to_string(f.dimension()));
  }
}

}  // namespace

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw DomainError("multi-index entries must be nonnegative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zero(std::size_t dimension) {
  return MultiIndex(std::vector<int>(dimension, 0));
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t dimension, int max_order) {
  std::vector<MultiIndex> out;
  std::vector<int> current(dimension, 0);
  for (int order = 0; order <= max_order; ++order) {
    // Compositions of `order` into `dimension` parts, lexicographically descending.
    std::function<void(std::size_t, int)> rec = [&](std::size_t axis, int remaining) {
      if (axis + 1 == dimension) {
        current[axis] = remaining;
        out.emplace_back(current);
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        current[axis] = k;
        rec(axis + 1, remaining - k);
      }
    };
    if (dimension == 0) break;
    rec(0, order);
  }
  return out;
}

// --------------------------------------------------------------- ScalarField

struct ScalarField::State {
  std::size_t dimension;
  Evaluator evaluator;
  DerivativeEvaluator derivative;
  double decay = 0.0;
};

ScalarField::ScalarField(std::size_t dimension, Evaluator evaluator)
    : ScalarField(dimension, std::move(evaluator), nullptr) {}

ScalarField::ScalarField(std::size_t dimension, Evaluator evaluator,
                         DerivativeEvaluator derivative) {
  if (dimension == 0) throw ShapeError("field dimension must be positive");
  if (!evaluator) throw DomainError("field needs an evaluator");
  state_ = std::make_shared<const State>(
      State{dimension, std::move(evaluator), std::move(derivative), 0.0});
}

std::size_t ScalarField::dimension() const noexcept { return state_->dimension; }

bool ScalarField::analytic() const noexcept { return static_cast<bool>(state_->derivative); }

double ScalarField::gaussian_decay() const noexcept { return state_->decay; }

ScalarField ScalarField::with_gaussian_decay(double rate) const {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("gaussian decay rate must be finite and nonnegative");
  }
  ScalarField copy = *this;
  auto state = std::make_shared<State>(*state_);
  state->decay = rate;
  copy.state_ = std::move(state);
  return copy;
}

double ScalarField::operator()(std::span<const double> x) const {
  require_dimension(*this, x);
  return state_->evaluator(x);
}

double ScalarField::operator()(std::initializer_list<double> x) const {
  return (*this)(std::span<const double>(x.begin(), x.size()));
}

double ScalarField::eval_unchecked(std::span<const double> x) const { return state_->evaluator(x); }

double ScalarField::derivative(const MultiIndex& alpha, std::span<const double> x) const {
  if (!analytic()) throw CapabilityError("field has no exact derivatives");
  require_dimension(*this, x);
  if (alpha.dimension() != dimension()) throw ShapeError("multi-index dimension mismatch");
  if (alpha.order() == 0) return state_->evaluator(x);
  return state_->derivative(alpha, x);
}

ScalarField constant_field(std::size_t dimension, double value) {
  return ScalarField(
      dimension, [value](std::span<const double>) { return value; },
      [value](const MultiIndex& a, std::span<const double>) { return a.order() == 0 ? value : 0.0; });
}

ScalarField gaussian_field(std::size_t dimension, double amplitude, double rate) {
  ScalarField f(
      dimension,
      [amplitude, rate](std::span<const double> x) {
        return amplitude * std::exp(-rate * squared_norm(x));
      },
      [amplitude, rate](const MultiIndex& a, std::span<const double> x) {
        double factor = amplitude * std::exp(-rate * squared_norm(x));
        for (std::size_t i = 0; i < x.size(); ++i) {
          factor *= gaussian_derivative_factor(a[i], rate, x[i]);
        }
        return factor;
      });
  return rate > 0.0 ? f.with_gaussian_decay(rate) : f;
}

ScalarField polynomial_field(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  auto c = std::make_shared<const std::vector<double>>(std::move(coefficients));
  return ScalarField(
      1, [c](std::span<const double> x) { return polynomial_derivative(*c, 0, x[0]); },
      [c](const MultiIndex& a, std::span<const double> x) {
        return polynomial_derivative(*c, a[0], x[0]);
      });
}

ScalarField radial_polynomial_field(std::size_t dimension, std::vector<double> coefficients) {
  if (dimension == 1) {
    std::vector<double> expanded(2 * coefficients.size(), 0.0);
    for (std::size_t k = 0; k < coefficients.size(); ++k) expanded[2 * k] = coefficients[k];
    return polynomial_field(std::move(expanded));
  }
  auto c = std::make_shared<const std::vector<double>>(std::move(coefficients));
  return ScalarField(dimension, [c](std::span<const double> x) {
    const double r2 = squared_norm(x);
    double acc = 0.0;
    for (auto it = c->rbegin(); it != c->rend(); ++it) acc = acc * r2 + *it;
    return acc;
  });
}

ScalarField scale(double factor, const ScalarField& f) {
  ScalarField::DerivativeEvaluator deriv;
  if (f.analytic()) {
    deriv = [factor, f](const MultiIndex& a, std::span<const double> x) {
      return factor * f.derivative(a, x);
    };
  }
  ScalarField out(
      f.dimension(), [factor, f](std::span<const double> x) { return factor * f.eval_unchecked(x); },
      std::move(deriv));
  return out.with_gaussian_decay(f.gaussian_decay());
}

ScalarField multiply(const ScalarField& f, const ScalarField& g) {
  if (f.dimension() != g.dimension()) throw ShapeError("product of fields of different dimension");
  ScalarField::DerivativeEvaluator deriv;
  if (f.analytic() && g.analytic()) {
    deriv = [f, g](const MultiIndex& a, std::span<const double> x) {
      // Leibniz: Σ_{β<=α} C(α,β) ∂^β f ∂^{α-β} g
      const std::size_t d = a.dimension();
      std::vector<int> beta(d, 0);
      std::vector<int> rest(d, 0);
      double total = 0.0;
      while (true) {
        double weight = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
          weight *= binomial(a[i], beta[i]);
          rest[i] = a[i] - beta[i];
        }
        total += weight * f.derivative(MultiIndex(beta), x) * g.derivative(MultiIndex(rest), x);
        std::size_t axis = 0;
        while (axis < d && beta[axis] == a[axis]) beta[axis++] = 0;
        if (axis == d) break;
        ++beta[axis];
      }
      return total;
    };
  }
  ScalarField out(
      f.dimension(),
      [f, g](std::span<const double> x) { return f.eval_unchecked(x) * g.eval_unchecked(x); },
      std::move(deriv));
  return out.with_gaussian_decay(f.gaussian_decay() + g.gaussian_decay());
}

ScalarField add(const ScalarField& f, const ScalarField& g) {
  if (f.dimension() != g.dimension()) throw ShapeError("sum of fields of different dimension");
  ScalarField::DerivativeEvaluator deriv;
  if (f.analytic() && g.analytic()) {
    deriv = [f, g](const MultiIndex& a, std::span<const double> x) {
      return f.derivative(a, x) + g.derivative(a, x);
    };
  }
  ScalarField out(
      f.dimension(),
      [f, g](std::span<const double> x) { return f.eval_unchecked(x) + g.eval_unchecked(x); },
      std::move(deriv));
  return out.with_gaussian_decay(std::min(f.gaussian_decay(), g.gaussian_decay()));
}

// ---------------------------------------------------------------- derivatives

namespace {

// Tensor central-difference stencil, one axis at a time.
double central_difference(const ScalarField& f, const MultiIndex& alpha, std::vector<double>& x,
                          std::size_t axis, double h) {
  if (axis == x.size()) return f.eval_unchecked(x);
  const int k = alpha[axis];
  if (k == 0) return central_difference(f, alpha, x, axis + 1, h);
  const double origin = x[axis];
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    x[axis] = origin + (0.5 * k - j) * h;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(k, j) * central_difference(f, alpha, x, axis + 1, h);
  }
  x[axis] = origin;
  return sum / std::pow(h, k);
}

}  // namespace

DerivativeResult partial_derivative(const ScalarField& f, const MultiIndex& alpha,
                                    std::span<const double> x, const DerivativeOptions& options) {
  require_dimension(f, x);
  if (alpha.dimension() != f.dimension()) throw ShapeError("multi-index dimension mismatch");
  if (alpha.order() > options.max_order) {
    throw CapabilityError("derivative order " + std::to_string(alpha.order()) +
                          " exceeds the configured maximum " + std::to_string(options.max_order));
  }
  if (!(options.step > 0.0)) throw DomainError("finite-difference step must be positive");
  if (f.analytic()) return {f.derivative(alpha, x), 0.0, true};
  if (alpha.order() == 0) return {f.eval_unchecked(x), 0.0, true};

  const int order = alpha.order();
  const double base = order <= 2 ? options.step : std::pow(options.step, 2.0 / order);
  const double h = base * (1.0 + euclidean_norm(x));
  std::vector<double> work(x.begin(), x.end());
  return {central_difference(f, alpha, work, 0, h), h, false};
}

ScalarField gaussian_damp(const ScalarField& f, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("damping rate must be positive, got " + std::to_string(gamma));
  }
  return multiply(f, gaussian_field(f.dimension(), 1.0, gamma));
}

// --------------------------------------------------------------- EpsilonGrid

EpsilonGrid::EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 4) throw GridError("ε-grid needs at least 4 points");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0 && v <= 1.0)) throw GridError("ε-grid values must lie in (0, 1]");
    if (i > 0 && !(v < values_[i - 1])) throw GridError("ε-grid must be strictly decreasing");
  }
}

EpsilonGrid EpsilonGrid::geometric(std::size_t levels, double first, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw GridError("geometric ratio must lie in (0, 1)");
  std::vector<double> v(levels);
  double e = first;
  for (auto& x : v) {
    x = e;
    e *= ratio;
  }
  return EpsilonGrid(std::move(v));
}

std::size_t EpsilonGrid::index_of(double eps) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::abs(values_[i] - eps) <= 1e-12 * values_[i]) return i;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", eps);
  throw GridError(std::string("ε = ") + buf + " is not on the grid");
}

bool EpsilonGrid::contains(double eps) const noexcept {
  return std::any_of(values_.begin(), values_.end(),
                     [eps](double v) { return std::abs(v - eps) <= 1e-12 * v; });
}

// ---------------------------------------------------------------------- nets

FunctionNet::FunctionNet(EpsilonGrid grid, std::vector<ScalarField> fields)
    : grid_(std::move(grid)), fields_(std::move(fields)) {
  if (fields_.size() != grid_.size()) throw GridError("net needs exactly one field per grid point");
  for (const auto& f : fields_) {
    if (f.dimension() != fields_.front().dimension()) {
      throw ShapeError("all fields of a net must share one dimension");
    }
  }
}

GeneralizedConstantNet::GeneralizedConstantNet(EpsilonGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridError("constant net needs one value per grid point");
}

double evaluate(const FunctionNet& net, double eps, std::span<const double> x) {
  return net.field(eps)(x);
}

FunctionNet double_regularize(const FunctionNet& net) {
  std::vector<ScalarField> damped;
  damped.reserve(net.grid().size());
  for (std::size_t i = 0; i < net.grid().size(); ++i) {
    damped.push_back(gaussian_damp(net.field_at(i), net.grid()[i]));
  }
  return FunctionNet(net.grid(), std::move(damped));
}

// --------------------------------------------------------------- SamplingBox

void SamplingBox::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw DomainError("sampling box half-width must be positive");
  }
  if (points_per_axis < 3) throw DomainError("sampling box needs at least 3 points per axis");
}

std::size_t SamplingBox::point_count(std::size_t dimension) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < dimension; ++i) n *= static_cast<std::size_t>(points_per_axis);
  return n;
}

void SamplingBox::point(std::size_t index, std::span<double> out) const {
  const auto ppa = static_cast<std::size_t>(points_per_axis);
  const double spacing = 2.0 * half_width / static_cast<double>(ppa - 1);
  for (double& coord : out) {
    const std::size_t j = index % ppa;
    index /= ppa;
    // Symmetric construction keeps the lattice exactly symmetric about 0.
    coord = (2.0 * static_cast<double>(j) - static_cast<double>(ppa - 1)) * 0.5 * spacing;
  }
}

bool SamplingBox::on_boundary_shell(std::span<const double> x) const noexcept {
  return std::any_of(x.begin(), x.end(),
                     [this](double v) { return std::abs(v) >= 0.9 * half_width - 1e-12; });
}

double euclidean_norm(std::span<const double> x) noexcept { return std::sqrt(squared_norm(x)); }

std::string describe_point(std::span<const double> x) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", x[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

}  // namespace colombeau
