#pragma once

#include <cmath>
#include <numbers>
#include <utility>

namespace colombeau::detail {

inline double hermite_h0(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
}

// (h_n(x), h_{n-1}(x)) of the orthonormal Hermite functions, via
// h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}. h_{-1} := 0.
inline std::pair<double, double> hermite_pair(int n, double x) noexcept {
  double prev = 0.0;
  double cur = hermite_h0(x);
  for (int k = 0; k < n; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace colombeau::detail
