#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "colombeau/errors.hpp"
#include "colombeau/hermite.hpp"
#include "colombeau/quadrature.hpp"

using namespace colombeau;
using testing::rel_err;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

// ∫ t^k e^{-t^2} dt
double gaussian_moment(int k) { return k % 2 ? 0.0 : std::tgamma((k + 1) / 2.0); }

}  // namespace

TEST_CASE("one node sits at the origin with the full Gaussian mass") {
  const QuadratureRule r = gauss_hermite(1);
  REQUIRE(r.size() == 1);
  CHECK(r.nodes[0] == 0.0);
  CHECK(rel_err(r.weights[0], kSqrtPi) < 1e-15);
}

TEST_CASE("two nodes are the roots of 4z^2 - 2") {
  const QuadratureRule r = gauss_hermite(2);
  CHECK(std::abs(r.nodes[0] + 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(r.nodes[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(rel_err(r.weights[0], kSqrtPi / 2) < 1e-15);
  CHECK(rel_err(r.weights[1], kSqrtPi / 2) < 1e-15);
  // ∫ z^2 e^{-z^2} = √π/2
  const double second = r.weights[0] * r.nodes[0] * r.nodes[0] + r.weights[1] * r.nodes[1] * r.nodes[1];
  CHECK(std::abs(second - kSqrtPi / 2) < 1e-14);
}

TEST_CASE("rules are symmetric, ordered and carry mass √π") {
  for (int m : {1, 2, 3, 7, 16, 64, 128, 255, 256}) {
    CAPTURE(m);
    const QuadratureRule r = gauss_hermite(m);
    REQUIRE(r.size() == static_cast<std::size_t>(m));
    double mass = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(r.weights[i] > 0.0);
      CHECK(std::isfinite(r.scaled_weights[i]));
      CHECK(r.nodes[i] == -r.nodes[r.size() - 1 - i]);
      if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
      mass += r.weights[i];
    }
    CHECK(std::abs(mass - kSqrtPi) < 1e-12);
  }
}

TEST_CASE("scaled weights stay finite where plain weights underflow") {
  const QuadratureRule r = gauss_hermite(512);
  for (double w : r.scaled_weights) CHECK(std::isfinite(w));
  CHECK(r.scaled_weights.front() > 0.0);
}

TEST_CASE("node counts outside [1, 512] are rejected") {
  CHECK_THROWS_AS(gauss_hermite(0), CapabilityError);
  CHECK_THROWS_AS(gauss_hermite(513), CapabilityError);
}

TEST_CASE("polynomial exactness up to degree 2m-1") {
  for (int m : {2, 8, 32}) {
    const QuadratureRule r = gauss_hermite(m);
    for (int k = 0; k <= 2 * m - 1; ++k) {
      CAPTURE(m);
      CAPTURE(k);
      double sum = 0.0;
      double magnitude = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double term = r.weights[i] * std::pow(r.nodes[i], k);
        sum += term;
        magnitude += std::abs(term);
      }
      const double exact = gaussian_moment(k);
      CHECK(std::abs(sum - exact) <= 1e-13 * std::max(magnitude, 1.0));
    }
  }
}

TEST_CASE("cached rules equal freshly built ones") {
  const QuadratureRule fresh = gauss_hermite(40);
  const QuadratureRule& cached = gauss_hermite_cached(40);
  CHECK(fresh.nodes == cached.nodes);
  CHECK(fresh.weights == cached.weights);
  CHECK(&cached == &gauss_hermite_cached(40));
}

TEST_CASE("damped integral of 1 is (π/γ)^{n/2}") {
  const ScalarField one1 = constant_field(1, 1.0);
  const ScalarField one2 = constant_field(2, 1.0);
  for (double lg = -4.0; lg <= 0.0; lg += 0.25) {
    const double gamma = std::pow(10.0, lg);
    CAPTURE(gamma);
    CHECK(rel_err(integrate_damped(one1, gamma, 64), std::sqrt(std::numbers::pi / gamma)) < 1e-12);
    CHECK(rel_err(integrate_damped(one2, gamma, 16), std::numbers::pi / gamma) < 1e-12);
  }
}

TEST_CASE("moment and Gaussian product oracles") {
  for (double eps : {0.5, 0.01, 1e-4}) {
    const ScalarField z4 = polynomial_field({0, 0, 0, 0, 1});
    CHECK(rel_err(integrate_damped(z4, eps, 8), 0.75 * kSqrtPi * std::pow(eps, -2.5)) < 1e-12);
  }
  const ScalarField g = gaussian_field(1, 1.0, 1.0);
  CHECK(rel_err(integrate_damped(g, 1.0, 8), std::sqrt(std::numbers::pi / 2)) < 1e-14);
}

TEST_CASE("non-finite integrand names the node") {
  const Integrand bad = [](std::span<const double> y) { return y[0] > 0.0 ? std::nan("") : 1.0; };
  try {
    integrate_damped(bad, 1, 1.0, 0.0, DampedOptions{});
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("invalid damping and dimensions are rejected") {
  CHECK_THROWS_AS(integrate_damped(constant_field(1, 1.0), 0.0, 8), DomainError);
  CHECK_THROWS_AS(integrate_damped(constant_field(3, 1.0), 1.0, 8), CapabilityError);
}

TEST_CASE("node doubling converges monotonically on Gaussian times polynomial") {
  // x^{2j} e^{-x^2} against e^{-0.1 x^2}: ∫ = Γ(j + 1/2) / 1.1^{j + 1/2}
  for (int j = 0; j <= 12; ++j) {
    const ScalarField f = multiply(polynomial_field([&] {
                                     std::vector<double> c(2 * j + 1, 0.0);
                                     c.back() = 1.0;
                                     return c;
                                   }()),
                                   gaussian_field(1, 1.0, 1.0));
    const double exact = std::tgamma(j + 0.5) / std::pow(1.1, j + 0.5);
    double previous = INFINITY;
    for (int m : {4, 8, 16, 32, 64}) {
      CAPTURE(j);
      CAPTURE(m);
      const double err = rel_err(integrate_damped(f, 0.1, m), exact);
      CHECK(err <= std::max(previous, 1e-14));
      previous = err;
    }
    CHECK(previous < 1e-13);
  }
}

TEST_CASE("without a decay hint narrow integrands converge slowly") {
  // Nodes placed for e^{-0.1 x^2} under-resolve a width-one Gaussian; the
  // error is not monotone at small m and only reaches ~1e-9 at m = 128.
  const double a = 1.1;
  const double exact = std::sqrt(std::numbers::pi / a) * (1.0 + 1.0 / (2.0 * a));
  const Integrand f = [](std::span<const double> y) { return (1.0 + y[0] * y[0]) * std::exp(-y[0] * y[0]); };
  DampedOptions o;
  o.nodes = 128;
  const double err = std::abs(integrate_damped(f, 1, 0.1, 0.0, o).value - exact);
  CHECK(err < 1e-7);
  CHECK(err > 1e-12);
  CHECK(std::abs(integrate_damped(f, 1, 0.1, 1.0, o).value - exact) < 1e-14);
}

TEST_CASE("error estimate reports the doubling change") {
  DampedOptions o;
  o.nodes = 8;
  o.estimate_error = true;
  const Integrand f = [](std::span<const double> y) { return std::cos(3.0 * y[0]); };
  const QuadratureResult r = integrate_damped(f, 1, 0.05, 0.0, o);
  CHECK(r.error_estimate > 1e-8);
  CHECK_FALSE(r.converged);
  o.nodes = 64;
  const QuadratureResult good = integrate_damped(gaussian_field(1, 1.0, 1.0), 0.5, o);
  CHECK(good.converged);
  CHECK(good.error_estimate < 1e-14);
}

TEST_CASE("serial and OpenMP damped sums agree bitwise") {
  const Integrand f = [](std::span<const double> y) { return std::sin(y[0]) + std::cos(y[1]) * y[0] * y[0]; };
  DampedOptions s;
  s.nodes = 48;
  s.execution = parallel::Execution::serial;
  DampedOptions p = s;
  p.execution = parallel::Execution::openmp;
  CHECK(integrate_damped(f, 2, 0.3, 0.0, s).value == integrate_damped(f, 2, 0.3, 0.0, p).value);
}

TEST_CASE("Simpson box rule oracles") {
  SamplingBox box10{10.0, 161};
  CHECK(std::abs(integrate_box(multiply(hermite_field(0), hermite_field(0)), box10, 2000).value - 1.0) < 1e-10);
  const ScalarField odd = testing::opaque(1, [](std::span<const double> x) { return x[0] * std::exp(-x[0] * x[0]); });
  CHECK(std::abs(integrate_box(odd, box10, 1000).value) < 1e-16);
  SamplingBox box8{8.0, 161};
  const BoxQuadratureResult g = integrate_box(gaussian_field(1, 1.0, 1.0), box8, 2000);
  CHECK(std::abs(g.value - kSqrtPi) < 1e-12);
  CHECK_FALSE(g.boundary_warning);
  CHECK(integrate_box(constant_field(1, 1.0), box8, 100).boundary_warning);
}

TEST_CASE("Simpson rule rounds the interval count up to even") {
  const QuadratureRule r = simpson_rule(1.0, 5);
  CHECK(r.size() == 7);
  CHECK(r.kind == RuleKind::trapezoid_box);
  double total = 0.0;
  for (double w : r.weights) total += w;
  CHECK(std::abs(total - 2.0) < 1e-15);
}
