// Serial reference kernels against their OpenMP variants.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include <omp.h>

#include "funnelsim/kernels.hpp"
#include "funnelsim/probes.hpp"

using namespace funnelsim;

namespace {

double seconds(const std::function<void()>& body, int repeats) {
  body();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / repeats;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx\n", name, 1e3 * serial, 1e3 * parallel,
              serial / parallel);
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());

  for (std::size_t n : {6667u, 100000u, 1000000u}) {
    std::vector<double> z(n, 1.0), load(n, 0.5), scratch(n);
    const double s = seconds([&] { kernels::upwind_step_serial(z, load, 1.0, 1e-3); }, 200);
    const double p = seconds([&] { kernels::upwind_step_parallel(z, scratch, load, 1.0, 1e-3); }, 200);
    char name[64];
    std::snprintf(name, sizeof name, "upwind step, N = %zu", n);
    row(name, s, p);
  }

  {
    std::vector<double> out(1000000);
    auto f = [](double x) { return std::exp(-x) / std::sqrt(x + 1.0); };
    const double s = seconds([&] { kernels::sample_serial(std::span<double>(out), 0.0, 1e-5, f); }, 20);
    const double p = seconds([&] { kernels::sample_parallel(std::span<double>(out), 0.0, 1e-5, f); }, 20);
    row("density sampling, 1e6 nodes", s, p);
  }

  {
    TransportOptions serial_opts, parallel_opts;
    serial_opts.dt = parallel_opts.dt = 1.5e-4;
    serial_opts.execution = kernels::Execution::serial;
    parallel_opts.execution = kernels::Execution::parallel;
    const Measure m({}, Density::exp_sqrt());
    const TransportPDE a(m, 1, serial_opts), b(m, 1, parallel_opts);
    const auto input = sample_signal([](double t, std::span<double> v) { v[0] = std::cos(t); }, 1, 0, 0.3, 1.5e-4);
    const double s = seconds([&] { run_operator(a, input); }, 3);
    const double p = seconds([&] { run_operator(b, input); }, 3);
    row("transport run, N = 66667", s, p);
  }

  {
    const ConvolutionOperator op(Measure({{0.5, 1.0}}, Density::exp_sqrt()));
    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double s = seconds([&] { probe_causality_trials(op, 32, 1, ProbeOptions{0.01, 3.0}); }, 2);
    omp_set_num_threads(threads);
    const double p = seconds([&] { probe_causality_trials(op, 32, 1, ProbeOptions{0.01, 3.0}); }, 2);
    row("causality probe, 32 trials", s, p);
  }
  return 0;
}
