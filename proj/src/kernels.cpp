#include "funnelsim/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace funnelsim::kernels {

void upwind_step_serial(std::span<double> z, std::span<const double> load, double courant, double source) {
  const std::size_t n = z.size();
  if (n == 0) {
    return;
  }
  // Ascending sweep: z[i + 1] is still the old value when z[i] is updated.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    z[i] = z[i] + courant * (z[i + 1] - z[i]) + source * load[i];
  }
  z[n - 1] = z[n - 1] + courant * (0.0 - z[n - 1]) + source * load[n - 1];
}

void upwind_step_parallel(std::span<double> z, std::span<double> scratch, std::span<const double> load,
                          double courant, double source) {
  const auto n = static_cast<std::ptrdiff_t>(z.size());
  if (n == 0) {
    return;
  }
  if (scratch.size() < z.size()) {
    throw std::invalid_argument("upwind_step_parallel: scratch too small");
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double right = (i + 1 < n) ? z[k + 1] : 0.0;
    scratch[k] = z[k] + courant * (right - z[k]) + source * load[k];
  }
  std::copy_n(scratch.begin(), z.size(), z.begin());
}

double simpson_sum(std::span<const double> samples, double h) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("simpson_sum needs an odd number (>= 3) of samples");
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    (i % 2 ? odd : even) += samples[i];
  }
  return h / 3.0 * (samples.front() + 4.0 * odd + 2.0 * even + samples.back());
}

}  // namespace funnelsim::kernels
