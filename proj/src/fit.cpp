#include "colombeau/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace colombeau {

PowerFit fit_power_law(std::span<const double> eps, std::span<const double> values,
                       std::size_t begin, std::size_t end) {
  std::vector<double> xs;
  std::vector<double> ys;
  end = std::min({end, eps.size(), values.size()});
  for (std::size_t i = begin; i < end; ++i) {
    const double v = std::abs(values[i]);
    if (v > 0.0 && std::isfinite(v)) {
      xs.push_back(-std::log(eps[i]));
      ys.push_back(std::log(v));
    }
  }
  PowerFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.log_constant = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.log_constant + fit.slope * xs[i]);
    sse += r * r;
  }
  const double scale = std::max(1.0, std::abs(my));
  if (sse <= 1e-24 * n * scale * scale) {
    fit.r2 = 1.0;
  } else {
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 0.0;
  }
  return fit;
}

}  // namespace colombeau
