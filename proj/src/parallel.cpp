#include "colombeau/parallel.hpp"

#include <atomic>
#include <cassert>
#include <cmath>

namespace colombeau::parallel {

namespace {

std::atomic<Execution> g_default{
#ifdef _OPENMP
    Execution::openmp
#else
    Execution::serial
#endif
};

double row_dot(const double* row, std::span<const double> x) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double term = row[j] * x[j];
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace

Execution default_execution() noexcept { return g_default.load(std::memory_order_relaxed); }

void set_default_execution(Execution exec) noexcept {
  g_default.store(exec, std::memory_order_relaxed);
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

double ordered_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

ArgMax argmax(std::span<const double> values) noexcept {
  ArgMax best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::isnan(v)) return {i, v};
    if (v > best.value) best = {i, v};
  }
  return best;
}

void matvec_serial(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> y) {
  assert(matrix.size() == rows * cols && x.size() == cols && y.size() == rows);
  for (std::size_t i = 0; i < rows; ++i) y[i] = row_dot(matrix.data() + i * cols, x);
}

void matvec_openmp(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> y) {
  assert(matrix.size() == rows * cols && x.size() == cols && y.size() == rows);
#ifdef _OPENMP
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static) if (n > 1 && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    y[r] = row_dot(matrix.data() + r * cols, x);
  }
#else
  matvec_serial(matrix, rows, cols, x, y);
#endif
}

void matvec(std::span<const double> matrix, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y, Execution exec) {
  if (exec == Execution::openmp) {
    matvec_openmp(matrix, rows, cols, x, y);
  } else {
    matvec_serial(matrix, rows, cols, x, y);
  }
}

}  // namespace colombeau::parallel
