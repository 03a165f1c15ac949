#pragma once

// Data-parallel kernels shared by every module.
//
// Each kernel has a serial reference and an OpenMP variant. Both evaluate
// element-wise into a buffer and reduce in a fixed order afterwards, so the
// two variants produce bit-identical results regardless of thread count.

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace colombeau::parallel {

enum class Execution { serial, openmp };

// Process-wide default used when a caller does not pass an explicit policy.
Execution default_execution() noexcept;
void set_default_execution(Execution exec) noexcept;

int max_threads() noexcept;
bool openmp_enabled() noexcept;

template <class Fn>
void fill_serial(std::span<double> out, Fn&& fn) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(i);
}

// out[i] = fn(i) across threads. Nested calls from inside a parallel region
// run serially. If any fn(i) throws, the exception of the lowest index is
// rethrown after the loop.
template <class Fn>
void fill_openmp(std::span<double> out, Fn&& fn) {
#ifdef _OPENMP
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  std::exception_ptr first_error;
  std::ptrdiff_t first_index = n;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 16) if (n > 1 && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  fill_serial(out, std::forward<Fn>(fn));
#endif
}

template <class Fn>
void fill(std::span<double> out, Fn&& fn, Execution exec = default_execution()) {
  if (exec == Execution::openmp) {
    fill_openmp(out, std::forward<Fn>(fn));
  } else {
    fill_serial(out, std::forward<Fn>(fn));
  }
}

// Compensated (Neumaier) sum in index order.
double ordered_sum(std::span<const double> values) noexcept;

struct ArgMax {
  std::size_t index = 0;
  double value = -std::numeric_limits<double>::infinity();
};

// First index attaining the maximum. NaN entries win, so they cannot hide.
ArgMax argmax(std::span<const double> values) noexcept;

// y = A x for a row-major rows x cols matrix.
void matvec_serial(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> y);
void matvec_openmp(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> y);
void matvec(std::span<const double> matrix, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y,
            Execution exec = default_execution());

}  // namespace colombeau::parallel
