#include "colombeau/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "colombeau/errors.hpp"
#include "colombeau/fit.hpp"

namespace colombeau {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int derivative_capability(const ScalarField& f, const SeminormOptions& options) {
  return f.analytic() ? std::max(kAnalyticDerivativeCap, options.derivative.max_order)
                      : options.derivative.max_order;
}

DerivativeOptions capped(const DerivativeOptions& base, int capability) {
  DerivativeOptions out = base;
  out.max_order = capability;
  return out;
}

// Tracks the largest entry inside the box and on its outer shell separately.
struct ShellMax {
  double interior = -kInf;
  double shell = -kInf;
  std::size_t interior_index = 0;
  std::size_t shell_index = 0;

  void add(double value, std::size_t index, bool on_shell) {
    double& best = on_shell ? shell : interior;
    std::size_t& where = on_shell ? shell_index : interior_index;
    if (value > best || std::isnan(value)) {
      best = value;
      where = index;
    }
  }

  double value() const { return std::max(interior, shell); }
  bool boundary() const {
    if (std::isnan(shell)) return true;
    if (std::isnan(interior)) return false;
    return shell > interior + 1e-12 * std::abs(interior);
  }
  std::size_t index() const { return boundary() ? shell_index : interior_index; }
};

bool nonincreasing(std::span<const double> r) {
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i - 1] == -kInf) {
      if (r[i] != -kInf) return false;
      continue;
    }
    if (r[i] > r[i - 1] + 1e-12 * std::max(1.0, std::abs(r[i - 1]))) return false;
  }
  return true;
}

// Along the fit window, does the excess stay bounded? Evidence: its maximum
// over the finer half does not rise above its maximum over the coarser half.
bool bounded_along_window(std::span<const double> excess) {
  if (excess.size() < 2) return true;
  const std::size_t mid = excess.size() / 2;
  const double head = *std::max_element(excess.begin(), excess.begin() + static_cast<std::ptrdiff_t>(mid));
  const double tail = *std::max_element(excess.begin() + static_cast<std::ptrdiff_t>(mid), excess.end());
  if (std::isnan(head) || std::isnan(tail)) return false;
  if (tail == -kInf) return true;
  return tail <= head + 1e-9 * std::max(1.0, std::abs(head));
}

}  // namespace

NuSpec::NuSpec(double h_, WeightSequence derivative_weights_, int cap_)
    : NuSpec(h_, derivative_weights_, derivative_weights_, cap_) {}

NuSpec::NuSpec(double h_, WeightSequence derivative_weights_, WeightSequence monomial_weights_,
               int cap_)
    : h(h_),
      derivative_weights(std::move(derivative_weights_)),
      monomial_weights(std::move(monomial_weights_)),
      cap(cap_) {
  if (!(h > 0.0)) throw DomainError("ν needs h > 0");
  if (cap < 0) throw DomainError("ν truncation cap must be nonnegative");
  if (static_cast<std::size_t>(cap) > derivative_weights.max_index() ||
      static_cast<std::size_t>(cap) > monomial_weights.max_index()) {
    throw CapabilityError("ν cap exceeds the length of its weight sequences");
  }
}

// --------------------------------------------------------------------- μ

DerivativeSamples DerivativeSamples::compute(const ScalarField& f, int l, const SamplingBox& box,
                                             const SeminormOptions& options) {
  box.validate();
  if (l < 0) throw DomainError("derivative order l must be nonnegative");
  const int capability = derivative_capability(f, options);
  if (l > capability) {
    throw CapabilityError("μ needs derivatives of order " + std::to_string(l) +
                          " but the field supports " + std::to_string(capability));
  }
  DerivativeSamples s;
  s.box_ = box;
  s.dimension_ = f.dimension();
  s.l_ = l;
  const std::size_t count = box.point_count(s.dimension_);
  s.magnitude_.resize(count);
  s.order_.assign(count, 0);
  s.norm_.resize(count);

  const std::vector<MultiIndex> alphas = multi_indices_up_to(s.dimension_, l);
  const DerivativeOptions deriv = capped(options.derivative, capability);
  parallel::fill(
      s.magnitude_,
      [&](std::size_t i) {
        Point x(s.dimension_);
        box.point(i, x);
        s.norm_[i] = euclidean_norm(x);
        double best = -1.0;
        for (const MultiIndex& alpha : alphas) {
          const double v = std::abs(partial_derivative(f, alpha, x, deriv).value);
          if (v > best || std::isnan(v)) {
            best = v;
            s.order_[i] = alpha.order();
            if (std::isnan(v)) break;
          }
        }
        return best;
      },
      options.execution);
  return s;
}

SeminormValue DerivativeSamples::mu(int q) const {
  ShellMax tracker;
  Point x(dimension_);
  for (std::size_t i = 0; i < magnitude_.size(); ++i) {
    box_.point(i, x);
    const double weighted =
        magnitude_[i] == 0.0 ? 0.0 : std::pow(1.0 + norm_[i], q) * magnitude_[i];
    tracker.add(weighted, i, box_.on_boundary_shell(x));
  }
  SeminormValue out;
  out.value = tracker.value();
  out.boundary_flag = tracker.boundary();
  out.argmax.resize(dimension_);
  box_.point(tracker.index(), out.argmax);
  out.derivative_order = order_[tracker.index()];
  return out;
}

SeminormValue mu_seminorm(const ScalarField& f, const MuSpec& spec, const SamplingBox& box,
                          const SeminormOptions& options) {
  return DerivativeSamples::compute(f, spec.l, box, options).mu(spec.q);
}

// --------------------------------------------------------------------- ν

NuTable NuTable::compute(const ScalarField& f, int cap, const SamplingBox& box,
                         const SeminormOptions& options) {
  box.validate();
  const int capability = derivative_capability(f, options);
  if (cap > capability) {
    throw CapabilityError("ν needs derivatives of order " + std::to_string(cap) +
                          " but the field supports " + std::to_string(capability));
  }
  const std::size_t d = f.dimension();
  const auto width = static_cast<std::size_t>(cap) + 1;
  const std::size_t cells = width * width;
  const std::size_t count = box.point_count(d);
  const std::vector<MultiIndex> alphas = multi_indices_up_to(d, cap);
  const DerivativeOptions deriv = capped(options.derivative, capability);

  // Per point: D[a] = max_{|α|=a} |∂^α f|, P[b] = max_{|β|=b} |x^β|, cell = D[a] P[b].
  std::vector<double> per_point(count * cells);
  std::vector<double> scratch(count);
  parallel::fill(
      scratch,
      [&](std::size_t i) {
        Point x(d);
        box.point(i, x);
        std::vector<double> D(width, 0.0);
        std::vector<double> P(width, 0.0);
        for (const MultiIndex& alpha : alphas) {
          const auto a = static_cast<std::size_t>(alpha.order());
          const double v = std::abs(partial_derivative(f, alpha, x, deriv).value);
          if (v > D[a] || std::isnan(v)) D[a] = v;
          double mono = 1.0;
          for (std::size_t axis = 0; axis < d; ++axis) mono *= std::pow(std::abs(x[axis]), alpha[axis]);
          P[a] = std::max(P[a], mono);
        }
        for (std::size_t a = 0; a < width; ++a) {
          for (std::size_t b = 0; b < width; ++b) per_point[i * cells + a * width + b] = D[a] * P[b];
        }
        return 0.0;
      },
      options.execution);

  NuTable table;
  table.cap_ = cap;
  table.table_.resize(cells);
  table.shell_.resize(cells);
  table.argmax_.resize(cells);
  Point x(d);
  std::vector<ShellMax> trackers(cells);
  for (std::size_t i = 0; i < count; ++i) {
    box.point(i, x);
    const bool shell = box.on_boundary_shell(x);
    for (std::size_t c = 0; c < cells; ++c) trackers[c].add(per_point[i * cells + c], i, shell);
  }
  for (std::size_t c = 0; c < cells; ++c) {
    table.table_[c] = trackers[c].value();
    table.shell_[c] = trackers[c].boundary() ? 1 : 0;
    table.argmax_[c].resize(d);
    box.point(trackers[c].index(), table.argmax_[c]);
  }
  return table;
}

double NuTable::log_value(const NuSpec& spec) const {
  if (spec.cap > cap_) throw CapabilityError("ν table was sampled with a smaller cap");
  const auto width = static_cast<std::size_t>(cap_) + 1;
  double best = -kInf;
  const double log_h = std::log(spec.h);
  for (int a = 0; a <= spec.cap; ++a) {
    for (int b = 0; b <= spec.cap; ++b) {
      const double t = table_[static_cast<std::size_t>(a) * width + static_cast<std::size_t>(b)];
      if (std::isnan(t)) return t;
      if (t == 0.0) continue;
      const double v = (a + b) * log_h + std::log(t) -
                       spec.derivative_weights.log_at(static_cast<std::size_t>(a)) -
                       spec.monomial_weights.log_at(static_cast<std::size_t>(b));
      best = std::max(best, v);
    }
  }
  return best;
}

SeminormValue NuTable::evaluate(const NuSpec& spec) const {
  if (spec.cap > cap_) throw CapabilityError("ν table was sampled with a smaller cap");
  const auto width = static_cast<std::size_t>(cap_) + 1;
  SeminormValue out;
  double best = -kInf;
  std::size_t best_cell = 0;
  for (int a = 0; a <= spec.cap; ++a) {
    for (int b = 0; b <= spec.cap; ++b) {
      const std::size_t cell = static_cast<std::size_t>(a) * width + static_cast<std::size_t>(b);
      const double t = table_[cell];
      const double v = t == 0.0 ? -kInf
                                : (a + b) * std::log(spec.h) + std::log(t) -
                                      spec.derivative_weights.log_at(static_cast<std::size_t>(a)) -
                                      spec.monomial_weights.log_at(static_cast<std::size_t>(b));
      if (v > best || std::isnan(v)) {
        best = v;
        best_cell = cell;
        out.derivative_order = a;
        out.monomial_order = b;
      }
    }
  }
  out.value = best == -kInf ? 0.0 : std::exp(best);
  out.boundary_flag = best != -kInf && shell_[best_cell] != 0;
  out.argmax = argmax_[best_cell];
  return out;
}

SeminormValue nu_seminorm(const ScalarField& f, const NuSpec& spec, const SamplingBox& box,
                          const SeminormOptions& options) {
  return NuTable::compute(f, spec.cap, box, options).evaluate(spec);
}

// -------------------------------------------------------------- verdicts

std::string Verdict::to_string() const {
  switch (kind) {
    case VerdictKind::moderate:
      return order ? "moderate(" + std::to_string(*order) + ")" : "moderate";
    case VerdictKind::negligible:
      return "negligible";
    case VerdictKind::neither:
      return "neither";
    case VerdictKind::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

GrowthReport classify_series(std::span<const double> eps, std::span<const double> values,
                             bool boundary_flag, const GrowthOptions& options) {
  if (eps.size() != values.size()) throw ShapeError("ε and value series differ in length");
  if (eps.size() < 4) throw GridError("classification needs at least 4 ε-levels");
  GrowthReport report;
  report.eps.assign(eps.begin(), eps.end());
  report.values.assign(values.begin(), values.end());
  report.boundary_flag = boundary_flag;

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      report.verdict = {VerdictKind::neither, std::nullopt};
      report.diagnostics.push_back("seminorm is not finite at ε = " + std::to_string(eps[i]));
      return report;
    }
  }
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    report.verdict = {VerdictKind::negligible, std::nullopt};
    report.diagnostics.push_back("all seminorm values are zero; slope fit skipped");
    return report;
  }

  const std::size_t begin = eps.size() / 2;
  const std::size_t window = eps.size() - begin;
  const PowerFit fit = fit_power_law(eps, values, begin, eps.size());
  report.slope = fit.slope;
  report.r2 = fit.r2;

  // ∀p <= p_max: value_ε / ε^p decreases along the fit window.
  bool negligible = true;
  std::vector<double> ratio(window);
  for (int p = 0; p <= options.p_max && negligible; ++p) {
    for (std::size_t k = 0; k < window; ++k) {
      const double v = std::abs(values[begin + k]);
      ratio[k] = v == 0.0 ? -kInf : std::log(v) - p * std::log(eps[begin + k]);
    }
    const bool drops = ratio.back() == -kInf || ratio.back() < ratio.front() - 1e-9;
    negligible = nonincreasing(ratio) && drops;
  }
  if (negligible) {
    report.verdict = {VerdictKind::negligible, std::nullopt};
    report.diagnostics.push_back("value/ε^p decreases along the fit window for every p <= " +
                                 std::to_string(options.p_max));
    return report;
  }

  if (fit.points < 2) {
    report.verdict = {VerdictKind::inconclusive, std::nullopt};
    report.diagnostics.push_back("fewer than two nonzero values in the fit window");
    return report;
  }

  // Local slopes that keep increasing by more than one order signal growth
  // faster than any power of 1/ε.
  std::vector<double> local;
  for (std::size_t k = begin + 1; k < eps.size(); ++k) {
    const double a = std::abs(values[k - 1]);
    const double b = std::abs(values[k]);
    if (a > 0.0 && b > 0.0) local.push_back(std::log(b / a) / std::log(eps[k - 1] / eps[k]));
  }
  if (local.size() >= 2) {
    bool increasing = true;
    for (std::size_t i = 1; i < local.size(); ++i) increasing = increasing && local[i] > local[i - 1];
    if (increasing && local.back() - local.front() > 1.0) {
      report.verdict = {VerdictKind::neither, std::nullopt};
      report.diagnostics.push_back("local growth order keeps increasing: super-polynomial in 1/ε");
      return report;
    }
  }

  if (fit.r2 < options.r2_threshold) {
    report.verdict = {VerdictKind::inconclusive, std::nullopt};
    report.diagnostics.push_back("power-law fit r2 below threshold");
    return report;
  }
  const int order = std::max(0, static_cast<int>(std::ceil(fit.slope - options.slope_tolerance)));
  report.verdict = {VerdictKind::moderate, order};
  return report;
}

GrowthReport classify_power_growth(const FunctionNet& net, const MuSpec& spec,
                                   const SamplingBox& box, const GrowthOptions& options) {
  const EpsilonGrid& grid = net.grid();
  std::vector<double> values(grid.size());
  bool boundary = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SeminormValue v = mu_seminorm(net.field_at(i), spec, box, options.seminorm);
    values[i] = v.value;
    boundary = boundary || v.boundary_flag;
  }
  GrowthReport report = classify_series(grid.values(), values, boundary, options);
  report.q = spec.q;
  return report;
}

GrowthReport classify_constant(const GeneralizedConstantNet& net, const GrowthOptions& options) {
  std::vector<double> magnitudes(net.values().size());
  std::transform(net.values().begin(), net.values().end(), magnitudes.begin(),
                 [](double v) { return std::abs(v); });
  return classify_series(net.grid().values(), magnitudes, false, options);
}

GrowthReport classify_tempered(const FunctionNet& net, int l, const SamplingBox& box,
                               const GrowthOptions& options) {
  const EpsilonGrid& grid = net.grid();
  std::vector<DerivativeSamples> samples;
  samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    samples.push_back(DerivativeSamples::compute(net.field_at(i), l, box, options.seminorm));
  }
  GrowthReport last;
  bool any_boundary = false;
  for (int q = 0; q <= options.q_max; ++q) {
    std::vector<double> values(grid.size());
    bool boundary = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const SeminormValue v = samples[i].mu(-q);
      values[i] = v.value;
      boundary = boundary || v.boundary_flag;
    }
    any_boundary = any_boundary || boundary;
    GrowthReport report = classify_series(grid.values(), values, boundary, options);
    report.q = q;
    const bool accepted = report.verdict.kind == VerdictKind::moderate ||
                          report.verdict.kind == VerdictKind::negligible;
    if (accepted && !boundary) return report;
    last = std::move(report);
  }
  last.verdict = {VerdictKind::neither, std::nullopt};
  last.boundary_flag = any_boundary;
  last.q.reset();
  last.diagnostics.push_back("no q <= " + std::to_string(options.q_max) +
                             " bounds μ_{-q,l} inside the box");
  return last;
}

UltraReport classify_ultra(const FunctionNet& net, const NuSpec& spec, const WeightSequence& N,
                           UltraType type, const SamplingBox& box, const UltraOptions& options) {
  if (options.h_values.empty() || options.k_values.empty()) {
    throw ConfigError("ultradistribution classification needs nonempty h and k grids");
  }
  const EpsilonGrid& grid = net.grid();
  const std::size_t begin = grid.fine_half_begin();
  const WeightSequence starred = N.starred();

  std::vector<NuTable> tables;
  tables.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tables.push_back(NuTable::compute(net.field_at(i), spec.cap, box, options.growth.seminorm));
  }

  UltraReport report;
  report.type = type;
  const std::size_t H = options.h_values.size();
  const std::size_t K = options.k_values.size();
  std::vector<std::vector<double>> log_nu(H, std::vector<double>(grid.size()));
  std::vector<std::vector<bool>> boundary(H, std::vector<bool>(grid.size()));
  for (std::size_t hi = 0; hi < H; ++hi) {
    NuSpec at_h = spec;
    at_h.h = options.h_values[hi];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      log_nu[hi][i] = tables[i].log_value(at_h);
      boundary[hi][i] = tables[i].evaluate(at_h).boundary_flag;
    }
  }

  std::vector<double> moderate_excess(grid.size() - begin);
  std::vector<double> ideal_excess(grid.size() - begin);
  std::vector<std::vector<char>> mod(H, std::vector<char>(K));
  std::vector<std::vector<char>> ide(H, std::vector<char>(K));
  for (std::size_t hi = 0; hi < H; ++hi) {
    for (std::size_t ki = 0; ki < K; ++ki) {
      for (std::size_t i = begin; i < grid.size(); ++i) {
        const AssociatedValue bound = associated_function(starred, options.k_values[ki] / grid[i]);
        report.growth_function_truncated = report.growth_function_truncated || bound.truncated;
        moderate_excess[i - begin] = log_nu[hi][i] - bound.value;
        ideal_excess[i - begin] = log_nu[hi][i] + bound.value;
      }
      mod[hi][ki] = bounded_along_window(moderate_excess) ? 1 : 0;
      ide[hi][ki] = bounded_along_window(ideal_excess) ? 1 : 0;
      report.cells.push_back({options.h_values[hi], options.k_values[ki], mod[hi][ki] != 0,
                              ide[hi][ki] != 0});
    }
  }

  auto exists_k = [&](const std::vector<char>& row) {
    return std::any_of(row.begin(), row.end(), [](char c) { return c != 0; });
  };
  auto all_k = [&](const std::vector<char>& row) {
    return std::all_of(row.begin(), row.end(), [](char c) { return c != 0; });
  };
  std::size_t witness = 0;
  if (type == UltraType::roumieu) {
    report.moderate = false;
    for (std::size_t hi = 0; hi < H && !report.moderate; ++hi) {
      if (exists_k(mod[hi])) {
        report.moderate = true;
        witness = hi;
      }
    }
    report.ideal = false;
    for (std::size_t hi = 0; hi < H; ++hi) report.ideal = report.ideal || all_k(ide[hi]);
  } else {
    report.moderate = true;
    report.ideal = true;
    for (std::size_t hi = 0; hi < H; ++hi) {
      report.moderate = report.moderate && exists_k(mod[hi]);
      report.ideal = report.ideal && all_k(ide[hi]);
    }
  }
  if (report.moderate) {
    report.witness_h = options.h_values[witness];
    for (std::size_t ki = 0; ki < K; ++ki) {
      if (mod[witness][ki]) {
        report.witness_k = options.k_values[ki];
        break;
      }
    }
  }

  std::vector<double> values(grid.size());
  bool any_boundary = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = log_nu[witness][i] == -kInf ? 0.0 : std::exp(log_nu[witness][i]);
    any_boundary = any_boundary || boundary[witness][i];
  }
  GrowthReport& g = report.growth;
  g.eps = grid.values();
  g.values = values;
  const PowerFit fit = fit_power_law(grid.values(), values, begin, grid.size());
  g.slope = fit.slope;
  g.r2 = fit.r2;
  g.boundary_flag = any_boundary;
  if (report.ideal) {
    g.verdict = {VerdictKind::negligible, std::nullopt};
  } else if (report.moderate) {
    g.verdict = {VerdictKind::moderate, std::nullopt};
  } else {
    g.verdict = {VerdictKind::neither, std::nullopt};
  }
  if (report.growth_function_truncated) {
    g.diagnostics.push_back("N*(k/ε) reached the end of the weight sequence; bounds are truncated");
  }
  return report;
}

}  // namespace colombeau
