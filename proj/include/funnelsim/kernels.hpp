#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant; both produce bitwise-identical results (no reordered
// reductions), so the choice never changes a trace.

#include <cstddef>
#include <span>
#include <utility>

#include <omp.h>

namespace funnelsim::kernels {

enum class Execution { serial, parallel, automatic };

/// Problem size from which `automatic` switches to the OpenMP variant (when
/// more than one thread is available).
inline constexpr std::size_t kParallelThreshold = 4096;

inline bool use_parallel(Execution ex, std::size_t n) {
  return ex == Execution::parallel ||
         (ex == Execution::automatic && n >= kParallelThreshold && omp_get_max_threads() > 1);
}

// One explicit upwind step of z_t = c z_xi + load * y on nodes 0..N-1 with the
// inflow node z_N = 0:  z_i += courant (z_{i+1} - z_i) + source * load_i,
// where source = dt * y. In place.
void upwind_step_serial(std::span<double> z, std::span<const double> load, double courant, double source);

// Same update, computed out of place into `scratch` and swapped back.
void upwind_step_parallel(std::span<double> z, std::span<double> scratch, std::span<const double> load,
                          double courant, double source);

// Composite Simpson weights applied to samples f(a), f(a+h), ..., f(a+2n h).
// Serial and fixed-order so the result is reproducible.
double simpson_sum(std::span<const double> samples, double h);

// out[i] = f(a + i h). The parallel variant splits i across threads.
template <class F>
void sample_serial(std::span<double> out, double a, double h, F&& f) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f(a + static_cast<double>(i) * h);
  }
}

template <class F>
void sample_parallel(std::span<double> out, double a, double h, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = f(a + static_cast<double>(i) * h);
  }
}

template <class F>
void sample(Execution ex, std::span<double> out, double a, double h, F&& f) {
  if (use_parallel(ex, out.size())) {
    sample_parallel(out, a, h, std::forward<F>(f));
  } else {
    sample_serial(out, a, h, std::forward<F>(f));
  }
}

}  // namespace funnelsim::kernels
