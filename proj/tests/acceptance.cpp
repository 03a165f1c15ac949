// Acceptance checks 1-10: one PASS/FAIL line each; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "scenario.hpp"
#include "colombeau/hermite.hpp"
#include "colombeau/operators.hpp"
#include "colombeau/quadrature.hpp"
#include "colombeau/seminorms.hpp"
#include "colombeau/weights.hpp"

using namespace colombeau;
namespace fs = std::filesystem;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::vector<double> uniform(std::uint64_t seed, std::size_t count, double lo, double hi) {
  std::vector<double> out;
  for (const Point& p : cli::random_points(seed, count, 1, 1.0)) out.push_back(lo + (hi - lo) * 0.5 * (p[0] + 1.0));
  return out;
}

ScalarField hermite_pair(int left, int right) {
  const ScalarField a = hermite_field(left);
  const ScalarField b = hermite_field(right);
  return ScalarField(2, [a, b](std::span<const double> xy) {
    return a.eval_unchecked(xy.subspan(0, 1)) * b.eval_unchecked(xy.subspan(1, 1));
  });
}

GeneralizedOperator constant_kernel_operator(const EpsilonGrid& grid, const ScalarField& k, KernelDecay decay = {}) {
  return GeneralizedOperator(KernelNet::generate(grid, 1, [&](double) { return k; }, decay), QuadratureSpec{64});
}

FunctionNet constant_net(const EpsilonGrid& grid, const ScalarField& f) {
  return FunctionNet::generate(grid, [&](double) { return f; });
}

ScalarField monomial_kernel() {
  return ScalarField(2, [](std::span<const double> xy) { return xy[0] * xy[0] * xy[1] * xy[1]; });
}

Outcome composition_equivalence() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const EpsilonGrid grid = EpsilonGrid::geometric(8);
  const std::vector<Point> points = cli::random_points(1, 25, 1, 2.0);
  struct Pair {
    const char* name;
    GeneralizedOperator outer;
    GeneralizedOperator inner;
    FunctionNet phi;
  };
  const std::vector<Pair> pairs{
      {"gaussian", constant_kernel_operator(grid, gaussian_field(2, 1.0, 1.0), {1.0, 1.0}),
       constant_kernel_operator(grid, gaussian_field(2, 1.0, 1.0), {1.0, 1.0}),
       constant_net(grid, constant_field(1, 1.0))},
      {"rank-one", constant_kernel_operator(grid, hermite_pair(0, 1), {0.5, 0.5}),
       constant_kernel_operator(grid, hermite_pair(1, 0), {0.5, 0.5}), constant_net(grid, hermite_field(0))},
      {"monomial", constant_kernel_operator(grid, monomial_kernel()), constant_kernel_operator(grid, monomial_kernel()),
       constant_net(grid, constant_field(1, 1.0))}};
  for (const Pair& p : pairs) {
    double worst = 0.0;
    bool all = true;
    for (double eps : grid.values()) {
      const CompositionReport r = verify_composition(p.outer, p.inner, p.phi, eps, points, 1e-6);
      worst = std::max(worst, r.max_discrepancy);
      all = all && r.pass;
    }
    o.require(all, std::string(p.name) + fmt(" max discrepancy %.2e", worst));
  }
  const double t = seconds_since(start);
  o.require(t < 60.0, fmt("%.2f s for 3 pairs x 25 points x 8 levels", t));
  return o;
}

Outcome composed_closed_form() {
  Outcome o;
  const EpsilonGrid grid = EpsilonGrid::geometric(12);
  const GeneralizedOperator A = constant_kernel_operator(grid, gaussian_field(2, 1.0, 1.0), {1.0, 1.0});
  const GeneralizedOperator C = compose(A, A);
  const auto xs = uniform(2, 100, -3.0, 3.0);
  const auto ys = uniform(3, 100, -3.0, 3.0);
  const auto picks = uniform(4, 100, 0.0, 12.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const double eps = grid[std::min<std::size_t>(11, static_cast<std::size_t>(picks[i]))];
    const double want = std::sqrt(kPi / (2.0 + eps)) * std::exp(-(xs[i] * xs[i] + ys[i] * ys[i]));
    worst = std::max(worst, rel_err(C.kernel()(eps, Point{xs[i]}, Point{ys[i]}), want));
  }
  o.require(worst <= 1e-8, fmt("max relative error %.2e at 100 random (x, y, eps)", worst));
  return o;
}

Outcome monomial_slope() {
  Outcome o;
  const EpsilonGrid grid = EpsilonGrid::geometric(12);
  const GeneralizedOperator M = constant_kernel_operator(grid, monomial_kernel());
  const SamplingBox box{8.0, 41};
  const KernelGrowthReport r = kernel_growth_check(compose(M, M), 2, 2, box);
  o.require(std::abs(r.growth.slope - 2.5) <= 0.05, fmt("slope %.6f (target 2.5 +- 0.05)", r.growth.slope));
  // s(ε) = (3√π/4) ε^{-5/2} (R/(1+R))^4
  const double w = std::pow(box.half_width / (1.0 + box.half_width), 4.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, rel_err(r.growth.values[i], 0.75 * std::sqrt(kPi) * std::pow(grid[i], -2.5) * w));
  }
  o.require(worst < 1e-10, fmt("vs moment integral %.2e", worst));
  o.require(r.exceeds_nominal, fmt("nominal exponent %.1f exceeded, margin %.4f", r.nominal_exponent, r.margin_nominal));
  o.require(r.within_corrected,
            fmt("corrected exponent %.1f holds, margin %.4f", r.corrected_exponent, r.margin_corrected));
  return o;
}

Outcome classification() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const EpsilonGrid grid = EpsilonGrid::geometric(12);
  const SamplingBox box{8.0, 161};
  GrowthOptions options;
  options.p_max = 8;
  const FunctionNet moll = FunctionNet::generate(grid, [](double e) {
    return gaussian_field(1, 1.0 / (e * std::sqrt(kPi)), 1.0 / (e * e));
  });
  const GrowthReport m = classify_tempered(moll, 0, box, options);
  o.require(m.verdict == Verdict{VerdictKind::moderate, 1} && std::abs(m.slope - 1.0) <= 0.05,
            "mollifier " + m.verdict.to_string() + fmt(" slope %.6f", m.slope));
  const FunctionNet neg = FunctionNet::generate(grid, [](double e) { return constant_field(1, std::exp(-1.0 / e)); });
  const GrowthReport n = classify_tempered(neg, 0, box, options);
  o.require(n.verdict.kind == VerdictKind::negligible, "exp(-1/eps) " + n.verdict.to_string() + " (p_max 8)");
  const FunctionNet grow = FunctionNet::generate(grid, [](double) { return gaussian_field(1, 1.0, -1.0); });
  const GrowthReport g = classify_tempered(grow, 0, box, options);
  o.require(g.verdict.kind == VerdictKind::neither && g.boundary_flag,
            "exp(x^2) " + g.verdict.to_string() + (g.boundary_flag ? " with boundary flag" : " without boundary flag"));
  const double t = seconds_since(start);
  o.require(t < 30.0, fmt("%.2f s", t));
  return o;
}

Outcome hermite_battery() {
  Outcome o;
  const QuadratureRule& r = gauss_hermite_cached(64);
  std::vector<std::vector<double>> table;
  for (double t : r.nodes) table.push_back(hermite_functions(40, t));
  double ortho = 0.0;
  for (int m = 0; m <= 40; ++m) {
    for (int n = 0; n <= 40; ++n) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.scaled_weights[i] * table[i][m] * table[i][n];
      ortho = std::max(ortho, std::abs(s - (m == n ? 1.0 : 0.0)));
    }
  }
  o.require(ortho < 1e-10, fmt("orthonormality error %.2e", ortho));

  std::vector<double> b(65);
  const auto noise = uniform(5, b.size(), -1.0, 1.0);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = noise[k] / (1.0 + k);
  const ExpansionResult back = expand(synthesize_field(HermiteExpansion(b)), 64);
  double trip = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) trip = std::max(trip, std::abs(back.expansion.coefficients[k] - b[k]));
  o.require(trip < 1e-8, fmt("round trip at N=64 %.2e", trip));

  const EpsilonGrid grid = EpsilonGrid::geometric(12);
  const FunctionNet reg = regularize_ultra(HermiteExpansion::unit(0, 1), gevrey(2.0), 1.0, grid);
  double spread = 0.0;
  for (double x : {-3.0, -0.5, 0.0, 1.0, 2.5}) {
    for (std::size_t i = 1; i < grid.size(); ++i) spread = std::max(spread, std::abs(reg.field_at(i)({x}) - reg.field_at(0)({x})));
  }
  o.require(spread == 0.0, fmt("unit n=0 regularisation spread across grid %.1e", spread));
  return o;
}

Outcome inclusion_bound() {
  Outcome o;
  const EpsilonGrid grid = EpsilonGrid::geometric(12);
  const InclusionBoundReport r =
      verify_inclusion_bound(HermiteExpansion(std::vector<double>(129, 1.0)), gevrey(2.0), 1.0, grid);
  o.require(r.uniform_bound_holds && r.violations == 0,
            "uniform bound, n <= 128, " + std::to_string(r.violations) + " violations");
  bool finite = true;
  bool nonincreasing = true;
  for (std::size_t i = 0; i < r.log_constants.size(); ++i) {
    finite = finite && std::isfinite(r.log_constants[i]);
    if (i && r.log_constants[i] > r.log_constants[i - 1]) nonincreasing = false;
  }
  o.require(finite, "C_eps finite");
  o.require(nonincreasing, fmt("C_eps nonincreasing as eps decreases (log C_eps goes %.4f -> %.4f)",
                               r.log_constants.front(), r.log_constants.back()));
  return o;
}

Outcome exponential_series() {
  Outcome o;
  const EpsilonGrid grid = EpsilonGrid::geometric(8);
  const GeneralizedOperator P = constant_kernel_operator(grid, hermite_pair(0, 0), {0.5, 0.5});
  const FunctionNet phi = constant_net(grid, hermite_field(0));
  double value_err = 0.0;
  double ratio_err = 0.0;
  for (double eps : grid.values()) {
    const double c = 1.0 / std::sqrt(1.0 + eps);  // ∫ h_0^2 e^{-εz^2}, also b
    for (double x : {0.0, 0.5, -1.25}) {
      const ExpReport r = exp_apply(P, phi, eps, Point{x}, 30, 1e-17);
      const double h = hermite_function(0, x);
      value_err = std::max(value_err, std::abs(r.value - (h + h * c * std::expm1(c) / c)));
      for (std::size_t k = 1; k <= 8 && k <= r.ratios.size(); ++k) {
        ratio_err = std::max(ratio_err, std::abs(r.ratios[k - 1] / (c / (k + 1.0)) - 1.0));
      }
      if (r.ratios.size() < 8) ratio_err = INFINITY;
    }
  }
  o.require(value_err <= 1e-8, fmt("closed-form error %.2e", value_err));
  o.require(ratio_err <= 0.05, fmt("ratio vs c/(k+1) relative error %.2e for k <= 8", ratio_err));
  return o;
}

Outcome weights() {
  Outcome o;
  const ConditionReport g1 = check_conditions(gevrey(1.0));
  o.require(g1.m1.holds, "gevrey(1) log-convex");
  o.require(g1.m2.holds && g1.m2.c == 1.0 && g1.m2.H == 2.0, fmt("gevrey(1) stability c=%g H=%g", g1.m2.c, g1.m2.H));
  o.require(!g1.m3.converged, "gevrey(1) summability flagged divergent");
  const ConditionReport g2 = check_conditions(gevrey(2.0, 10000));
  const double pi2 = kPi * kPi / 6.0;
  o.require(g2.m3.converged && std::abs(g2.m3.limit_estimate - pi2) < 1e-3,
            fmt("gevrey(2) sum %.9f (partial %.9f) vs pi^2/6", g2.m3.limit_estimate, g2.m3.partial_sum));
  const WeightSequence g = gevrey(1.0);
  double brute = -INFINITY;
  for (std::size_t p = 0; p <= g.max_index(); ++p) brute = std::max(brute, static_cast<double>(p) - g.log_at(p));
  const double v = associated_function(g, std::numbers::e).value;
  o.require(std::abs(v - brute) <= 1e-9 && std::abs(v - 1.30685) < 1e-5, fmt("M(e) = %.12f", v));
  return o;
}

Outcome quadrature() {
  Outcome o;
  double worst = 0.0;
  for (int m : {2, 8, 32}) {
    const QuadratureRule r = gauss_hermite(m);
    for (int k = 0; k <= 2 * m - 1; ++k) {
      double sum = 0.0;
      double magnitude = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double term = r.weights[i] * std::pow(r.nodes[i], k);
        sum += term;
        magnitude += std::abs(term);
      }
      const double exact = k % 2 ? 0.0 : std::tgamma((k + 1) / 2.0);
      worst = std::max(worst, std::abs(sum - exact) / std::max(magnitude, 1.0));
    }
  }
  o.require(worst <= 1e-13, fmt("exactness battery %.2e", worst));
  double mass = 0.0;
  for (double lg = -4.0; lg <= 0.0; lg += 0.1) {
    const double gamma = std::pow(10.0, lg);
    mass = std::max(mass, rel_err(integrate_damped(constant_field(1, 1.0), gamma, 64), std::sqrt(kPi / gamma)));
  }
  o.require(mass <= 1e-12, fmt("(pi/gamma)^(1/2) over [1e-4, 1] %.2e", mass));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "colombeau_acceptance";
  fs::remove_all(base);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"classify", "mollifier"}, {"compose", "compose_monomial"}, {"expmap", "exp_rank_one"}, {"hermite", "hermite_ones"}};
  int files = 0;
  int identical = 0;
  for (const auto& [command, name] : runs) {
    const cli::Scenario s = cli::load_scenario(std::string(COLOMBEAU_SCENARIOS) + "/" + name + ".json", {});
    const auto a = cli::run_command(command, s, base / "first");
    const auto b = cli::run_command(command, s, base / "second");
    for (std::size_t i = 0; i < a.files.size() && i < b.files.size(); ++i) {
      ++files;
      if (slurp(a.files[i]) == slurp(b.files[i])) ++identical;
    }
  }
  o.require(files > 0 && identical == files,
            std::to_string(identical) + "/" + std::to_string(files) + " report files byte-identical");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"composition equals iterated application", composition_equivalence},
      {"composed Gaussian kernel closed form", composed_closed_form},
      {"composed monomial kernel growth exponent", monomial_slope},
      {"moderate / negligible classification", classification},
      {"Hermite battery", hermite_battery},
      {"Hermite inclusion bound", inclusion_bound},
      {"exponential series", exponential_series},
      {"weight sequences", weights},
      {"Gauss-Hermite quadrature", quadrature},
      {"report determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
