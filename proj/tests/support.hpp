#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "colombeau/core.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<double> uniform(std::uint64_t seed, std::size_t count, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (double& v : out) v = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return out;
}

// A field that hides its closed form, forcing finite differences.
inline colombeau::ScalarField opaque(std::size_t d, colombeau::ScalarField::Evaluator fn) {
  return colombeau::ScalarField(d, std::move(fn));
}

}  // namespace testing
