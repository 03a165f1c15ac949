#include "colombeau/operators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "colombeau/errors.hpp"
#include "colombeau/fit.hpp"
#include "colombeau/parallel.hpp"

namespace colombeau {

namespace {

constexpr std::size_t kMaxOperatorDimension = 2;
constexpr std::size_t kMaxNystromEntries = 4'000'000;

void require_same_grid(const EpsilonGrid& a, const EpsilonGrid& b) {
  if (!(a == b)) throw GridError("operators and nets must share one ε-grid");
}

DampedOptions damped_options(const QuadratureSpec& spec) {
  DampedOptions options;
  options.nodes = spec.nodes;
  options.estimate_error = spec.check_convergence;
  options.relative_tolerance = spec.relative_tolerance;
  return options;
}

// Write-once cache of kernel values keyed by the exact bits of (x, y).
class KernelMemo {
 public:
  struct Key {
    std::array<std::uint64_t, 4> bits{};
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (std::uint64_t b : k.bits) {
        h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };

  static Key key_of(std::span<const double> xy) {
    Key key;
    for (std::size_t i = 0; i < xy.size(); ++i) key.bits[i] = std::bit_cast<std::uint64_t>(xy[i]);
    return key;
  }

  template <class Compute>
  double get(std::span<const double> xy, Compute&& compute) {
    const Key key = key_of(xy);
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = compute();
    std::unique_lock lock(mutex_);
    values_.emplace(key, value);
    return value;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<Key, double, KeyHash> values_;
};

// Weighted node lattice for ∫ g(z) e^{-ε|z|^2} dz at Gauss-Hermite scale s.
struct NodeLattice {
  std::vector<Point> points;
  std::vector<double> weights;  // include s^{-n/2} and the damping
};

NodeLattice make_lattice(std::size_t n, int nodes, double eps, double scale) {
  const QuadratureRule& rule = gauss_hermite_cached(nodes);
  const std::size_t m = rule.size();
  const std::size_t count = n == 1 ? m : m * m;
  const double inv_sqrt = 1.0 / std::sqrt(scale);
  const double norm = std::pow(scale, -0.5 * static_cast<double>(n));
  NodeLattice lattice;
  lattice.points.resize(count, Point(n));
  lattice.weights.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t idx = k;
    double w = norm;
    double r2 = 0.0;
    for (std::size_t axis = 0; axis < n; ++axis) {
      const std::size_t j = idx % m;
      idx /= m;
      lattice.points[k][axis] = rule.nodes[j] * inv_sqrt;
      w *= rule.scaled_weights[j];
      r2 += lattice.points[k][axis] * lattice.points[k][axis];
    }
    lattice.weights[k] = w * std::exp(-eps * r2);
  }
  return lattice;
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

// ---------------------------------------------------------------- KernelNet

KernelNet::KernelNet(EpsilonGrid grid, std::size_t n, std::vector<ScalarField> kernels,
                     KernelDecay decay)
    : grid_(std::move(grid)), n_(n), kernels_(std::move(kernels)), decay_(decay) {
  if (n_ == 0) throw ShapeError("kernel dimension n must be positive");
  if (kernels_.size() != grid_.size()) throw GridError("kernel net needs one kernel per grid point");
  for (const auto& k : kernels_) {
    if (k.dimension() != 2 * n_) throw ShapeError("kernels must be fields on R^{2n}");
  }
  if (decay_.in_x < 0.0 || decay_.in_y < 0.0) throw DomainError("kernel decay rates must be >= 0");
}

double KernelNet::operator()(double eps, std::span<const double> x, std::span<const double> y) const {
  if (x.size() != n_ || y.size() != n_) throw ShapeError("kernel arguments must have dimension n");
  std::array<double, 2 * kMaxOperatorDimension> xy{};
  if (n_ > kMaxOperatorDimension) {
    std::vector<double> big(x.begin(), x.end());
    big.insert(big.end(), y.begin(), y.end());
    return kernel(eps)(big);
  }
  std::copy(x.begin(), x.end(), xy.begin());
  std::copy(y.begin(), y.end(), xy.begin() + static_cast<std::ptrdiff_t>(n_));
  return kernel(eps)(std::span<const double>(xy.data(), 2 * n_));
}

GeneralizedOperator::GeneralizedOperator(KernelNet kernel, QuadratureSpec quadrature)
    : kernel_(std::make_shared<const KernelNet>(std::move(kernel))), quadrature_(std::move(quadrature)) {
  if (quadrature_.nodes < 8) throw DomainError("operator quadrature needs at least 8 nodes");
  if (quadrature_.nodes > kMaxGaussHermiteNodes) throw CapabilityError("too many quadrature nodes");
  if (quadrature_.method != "gauss_hermite") {
    throw ConfigError("unknown quadrature method '" + quadrature_.method + "'");
  }
  if (kernel_->n() > kMaxOperatorDimension) {
    throw CapabilityError("quadrature-based operators support n <= 2");
  }
}

// -------------------------------------------------------------------- apply

ApplyResult apply(const GeneralizedOperator& A, const ScalarField& phi_eps, double eps,
                  std::span<const double> x) {
  const std::size_t n = A.n();
  if (x.size() != n) throw ShapeError("evaluation point must have dimension n");
  if (phi_eps.dimension() != n) throw ShapeError("φ must be a field on R^n");
  const ScalarField& K = A.kernel().kernel(eps);

  std::array<double, 2 * kMaxOperatorDimension> head{};
  std::copy(x.begin(), x.end(), head.begin());
  auto integrand = [&](std::span<const double> y) {
    std::array<double, 2 * kMaxOperatorDimension> xy = head;
    std::copy(y.begin(), y.end(), xy.begin() + static_cast<std::ptrdiff_t>(n));
    const double k = K.eval_unchecked(std::span<const double>(xy.data(), 2 * n));
    return k == 0.0 ? 0.0 : k * phi_eps.eval_unchecked(y);
  };
  const double decay = A.kernel().decay().in_y + phi_eps.gaussian_decay();
  const QuadratureResult q = integrate_damped(integrand, n, eps, decay, damped_options(A.quadrature()));
  ApplyResult result;
  result.value = q.value;
  if (A.quadrature().check_convergence) {
    result.error_estimate = q.error_estimate;
    if (!q.converged) {
      result.warning = "quadrature did not converge under node doubling (change " +
                       std::to_string(q.error_estimate) + ")";
    }
  }
  return result;
}

ApplyResult apply(const GeneralizedOperator& A, const FunctionNet& phi, double eps,
                  std::span<const double> x) {
  if (!A.grid().contains(eps)) throw GridError("ε is not on the operator's grid");
  return apply(A, phi.field(eps), eps, x);
}

ScalarField apply_field(const GeneralizedOperator& A, const ScalarField& phi_eps, double eps) {
  ScalarField f(A.n(), [A, phi_eps, eps](std::span<const double> x) {
    return apply(A, phi_eps, eps, x).value;
  });
  return f.with_gaussian_decay(A.kernel().decay().in_x);
}

FunctionNet apply_net(const GeneralizedOperator& A, const FunctionNet& phi) {
  require_same_grid(A.grid(), phi.grid());
  return FunctionNet::generate(A.grid(), [&](double eps) { return apply_field(A, phi.field(eps), eps); });
}

// ------------------------------------------------------------------ compose

GeneralizedOperator compose(const GeneralizedOperator& A2, const GeneralizedOperator& A1,
                            const CompositionOptions& options) {
  if (A2.n() != A1.n()) throw ShapeError("composed operators must act on the same R^n");
  require_same_grid(A2.grid(), A1.grid());
  const std::size_t n = A1.n();
  QuadratureSpec spec = A2.quadrature();
  spec.nodes = std::max(A2.quadrature().nodes, A1.quadrature().nodes);
  const double z_decay = A2.kernel().decay().in_y + A1.kernel().decay().in_x;
  const DampedOptions z_options = [&] {
    DampedOptions o = damped_options(spec);
    o.estimate_error = false;
    return o;
  }();

  std::vector<ScalarField> kernels;
  const EpsilonGrid& grid = A1.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid[i];
    const ScalarField K2 = A2.kernel().kernel_at(i);
    const ScalarField K1 = A1.kernel().kernel_at(i);
    auto evaluate = [K2, K1, eps, n, z_decay, z_options](std::span<const double> xy) {
      auto integrand = [&](std::span<const double> z) {
        std::array<double, 2 * kMaxOperatorDimension> xz{};
        std::array<double, 2 * kMaxOperatorDimension> zy{};
        for (std::size_t a = 0; a < n; ++a) {
          xz[a] = xy[a];
          xz[n + a] = z[a];
          zy[a] = z[a];
          zy[n + a] = xy[n + a];
        }
        const double left = K2.eval_unchecked(std::span<const double>(xz.data(), 2 * n));
        if (left == 0.0) return 0.0;
        return left * K1.eval_unchecked(std::span<const double>(zy.data(), 2 * n));
      };
      return integrate_damped(integrand, n, eps, z_decay, z_options).value;
    };
    if (options.memoize) {
      auto memo = std::make_shared<KernelMemo>();
      kernels.emplace_back(2 * n, [memo, evaluate](std::span<const double> xy) {
        return memo->get(xy, [&] { return evaluate(xy); });
      });
    } else {
      kernels.emplace_back(2 * n, evaluate);
    }
  }
  KernelDecay decay{A2.kernel().decay().in_x, A1.kernel().decay().in_y};
  return GeneralizedOperator(KernelNet(grid, n, std::move(kernels), decay), spec);
}

CompositionReport verify_composition(const GeneralizedOperator& A2, const GeneralizedOperator& A1,
                                     const FunctionNet& phi, double eps,
                                     const std::vector<Point>& points, double tolerance) {
  require_same_grid(A2.grid(), A1.grid());
  const GeneralizedOperator composed = compose(A2, A1);
  const ScalarField& phi_eps = phi.field(eps);
  const ScalarField inner = apply_field(A1, phi_eps, eps);

  CompositionReport report;
  report.tolerance = tolerance;
  report.sample_points = points;
  report.lhs.resize(points.size());
  report.rhs.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ApplyResult lhs = apply(composed, phi_eps, eps, points[i]);
    const ApplyResult rhs = apply(A2, inner, eps, points[i]);
    report.lhs[i] = lhs.value;
    report.rhs[i] = rhs.value;
    report.max_discrepancy = std::max(report.max_discrepancy, relative_gap(lhs.value, rhs.value));
    for (const auto* r : {&lhs, &rhs}) {
      if (r->warning) report.warnings.push_back(describe_point(points[i]) + ": " + *r->warning);
    }
  }
  report.pass = report.max_discrepancy <= tolerance;
  return report;
}

GeneralizedOperator power(const GeneralizedOperator& A, int k, const PowerOptions& options) {
  if (k < 1) throw DomainError("operator power needs k >= 1");
  const double work = k * std::pow(static_cast<double>(A.quadrature().nodes), static_cast<double>(A.n()));
  if (work > options.budget) {
    throw ResourceError("k * nodes^n = " + std::to_string(work) + " exceeds the budget " +
                        std::to_string(options.budget));
  }
  const bool memoize = options.memoize.value_or(k >= 3);
  GeneralizedOperator result = A;
  for (int i = 2; i <= k; ++i) result = compose(A, result, {memoize});
  return result;
}

// ---------------------------------------------------------------------- e^A

ExpReport exp_apply(const GeneralizedOperator& A, const FunctionNet& phi, double eps,
                    std::span<const double> x, int k_max, double tol) {
  if (k_max < 1) throw DomainError("exp_apply needs K_max >= 1");
  if (!(tol > 0.0)) throw DomainError("exp_apply needs a positive tolerance");
  if (!A.grid().contains(eps)) throw GridError("ε is not on the operator's grid");
  const ScalarField& phi_eps = phi.field(eps);
  const std::size_t n = A.n();
  if (x.size() != n) throw ShapeError("evaluation point must have dimension n");

  ExpReport report;
  report.identity_term = phi_eps(x);
  report.value = report.identity_term;

  const double first = apply(A, phi_eps, eps, x).value;
  report.terms.push_back(first);
  report.value += first;
  report.terms_used = 1;
  report.last_term = first;
  report.converged = std::abs(first) < tol;

  if (!report.converged && k_max > 1) {
    const KernelNet& K = A.kernel();
    const double scale = eps + K.decay().in_x + K.decay().in_y;
    const NodeLattice lattice = make_lattice(n, A.quadrature().nodes, eps, scale);
    const std::size_t count = lattice.points.size();
    if (count * count > kMaxNystromEntries) {
      throw ResourceError("Nyström matrix of " + std::to_string(count) + "^2 entries is too large");
    }
    // v_1 = (A φ) on the lattice; v_{k+1} = W v_k with W_ij = K(z_i, z_j) ω_j.
    std::vector<double> v(count);
    parallel::fill(v, [&](std::size_t i) { return apply(A, phi_eps, eps, lattice.points[i]).value; });
    std::vector<double> W(count * count);
    parallel::fill(W, [&](std::size_t idx) {
      const std::size_t i = idx / count;
      const std::size_t j = idx % count;
      return K(eps, lattice.points[i], lattice.points[j]) * lattice.weights[j];
    });
    std::vector<double> row(count);
    parallel::fill(row, [&](std::size_t j) { return K(eps, x, lattice.points[j]) * lattice.weights[j]; });

    std::vector<double> next(count);
    double factorial = 1.0;
    for (int k = 2; k <= k_max; ++k) {
      factorial *= k;
      double value = 0.0;
      parallel::matvec(row, 1, count, v, std::span<double>(&value, 1));
      const double term = value / factorial;
      report.terms.push_back(term);
      report.value += term;
      report.terms_used = k;
      report.last_term = term;
      if (std::abs(term) < tol) {
        report.converged = true;
        break;
      }
      if (k < k_max) {
        parallel::matvec(W, count, count, v, next);
        v.swap(next);
      }
    }
  }
  for (std::size_t k = 1; k < report.terms.size(); ++k) {
    report.ratios.push_back(report.terms[k - 1] != 0.0 ? report.terms[k] / report.terms[k - 1]
                                                       : std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

// ------------------------------------------------------------ growth checks

KernelGrowthReport kernel_growth_check(const GeneralizedOperator& A, int q1, int q2,
                                       const SamplingBox& box, const KernelGrowthOptions& options) {
  box.validate();
  const std::size_t n = A.n();
  const std::size_t dim = 2 * n;
  const std::size_t count = box.point_count(dim);
  const EpsilonGrid& grid = A.grid();
  const DerivativeOptions deriv = options.growth.seminorm.derivative;

  std::vector<MultiIndex> alphas{MultiIndex::zero(dim)};
  if (options.include_derivatives) {
    for (const MultiIndex& a : multi_indices_up_to(dim, 1)) {
      if (a.order() == 1) alphas.push_back(a);
    }
  }

  std::vector<double> values(grid.size());
  bool boundary = false;
  std::vector<double> weighted(count);
  for (std::size_t e = 0; e < grid.size(); ++e) {
    const ScalarField& K = A.kernel().kernel_at(e);
    parallel::fill(
        weighted,
        [&](std::size_t i) {
          Point xy(dim);
          box.point(i, xy);
          const double nx = euclidean_norm(std::span<const double>(xy.data(), n));
          const double ny = euclidean_norm(std::span<const double>(xy.data() + n, n));
          double magnitude = 0.0;
          for (const MultiIndex& a : alphas) {
            magnitude = std::max(magnitude, std::abs(partial_derivative(K, a, xy, deriv).value));
          }
          if (magnitude == 0.0) return 0.0;
          return std::pow(1.0 + nx, -q1) * std::pow(1.0 + ny, -q2) * magnitude;
        },
        options.growth.seminorm.execution);
    double interior = 0.0;
    double shell = 0.0;
    Point xy(dim);
    for (std::size_t i = 0; i < count; ++i) {
      box.point(i, xy);
      double& slot = box.on_boundary_shell(xy) ? shell : interior;
      slot = std::max(slot, weighted[i]);
    }
    values[e] = std::max(interior, shell);
    boundary = boundary || shell > interior * (1.0 + 1e-12);
  }

  KernelGrowthReport report;
  report.growth = classify_series(grid.values(), values, boundary, options.growth);
  report.q1 = q1;
  report.q2 = q2;
  report.nominal_exponent = 0.5 * (q1 + q2);
  report.corrected_exponent = 0.5 * (q1 + q2 + static_cast<double>(n));
  const double slope = report.growth.slope;
  report.margin_nominal = report.nominal_exponent - slope;
  report.margin_corrected = report.corrected_exponent - slope;
  constexpr double kExponentTolerance = 0.05;
  report.exceeds_nominal = slope > report.nominal_exponent + kExponentTolerance;
  report.within_corrected = slope <= report.corrected_exponent + kExponentTolerance;
  if (report.exceeds_nominal && report.within_corrected) {
    report.note = "exceeds nominal exponent, within corrected exponent";
  } else if (report.within_corrected) {
    report.note = "within both exponents";
  } else {
    report.note = "exceeds both exponents";
  }
  return report;
}

ModerationReport operator_moderation_check(
    const GeneralizedOperator& A, const std::vector<std::pair<std::string, FunctionNet>>& catalog,
    int l, const SamplingBox& box, const GrowthOptions& options) {
  if (catalog.empty()) throw ConfigError("moderation check needs at least one φ");
  const EpsilonGrid& grid = A.grid();
  ModerationReport report;
  report.l = l;
  report.eps = grid.values();

  auto smallest_weight = [&](const std::vector<DerivativeSamples>& samples, bool* flagged) {
    for (int q = 0; q <= options.q_max; ++q) {
      bool boundary = false;
      for (const auto& s : samples) boundary = boundary || s.mu(-q).boundary_flag;
      if (!boundary) return q;
    }
    *flagged = true;
    return options.q_max;
  };

  for (const auto& [name, phi] : catalog) {
    require_same_grid(grid, phi.grid());
    std::vector<DerivativeSamples> out_samples;
    std::vector<DerivativeSamples> in_samples;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out_samples.push_back(
          DerivativeSamples::compute(apply_field(A, phi.field_at(i), grid[i]), l, box, options.seminorm));
      in_samples.push_back(DerivativeSamples::compute(phi.field_at(i), 0, box, options.seminorm));
    }
    ModerationEntry entry;
    entry.name = name;
    entry.p = smallest_weight(out_samples, &entry.boundary_flag);
    entry.q_prime = smallest_weight(in_samples, &entry.boundary_flag);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double out = out_samples[i].mu(-entry.p).value;
      const double in = in_samples[i].mu(-entry.q_prime).value;
      entry.output_values.push_back(out);
      entry.input_values.push_back(in);
      entry.ratios.push_back(in > 0.0 ? out / in : (out == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()));
    }
    const GrowthReport ratio = classify_series(grid.values(), entry.ratios, entry.boundary_flag, options);
    entry.ratio_slope = ratio.slope;
    entry.ratio_verdict = ratio.verdict;
    entry.output_verdict =
        classify_series(grid.values(), entry.output_values, entry.boundary_flag, options).verdict;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace colombeau
