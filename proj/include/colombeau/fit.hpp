#pragma once

#include <cstddef>
#include <span>

namespace colombeau {

// Least-squares fit of log(value) against log(1/ε): value ≈ C ε^{-slope}.
struct PowerFit {
  double slope = 0.0;
  double log_constant = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;  // finite, positive samples used
};

// Fits samples [begin, end) of (eps, values). Zero or non-finite values are
// skipped. With fewer than two usable points the fit is empty (points < 2).
// A perfect fit, including a flat one, has r2 = 1.
PowerFit fit_power_law(std::span<const double> eps, std::span<const double> values,
                       std::size_t begin, std::size_t end);

}  // namespace colombeau
