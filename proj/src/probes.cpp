#include "funnelsim/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace funnelsim {

namespace {

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

// Sample grid k dt covering [-memory, horizon].
std::vector<double> probe_times(double memory, double horizon, double dt) {
  const auto first = -static_cast<long long>(std::ceil(memory / dt - 1e-9));
  const auto last = static_cast<long long>(std::floor(horizon / dt + 1e-9));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(last - first + 1));
  for (long long k = first; k <= last; ++k) {
    times.push_back(static_cast<double>(k) * dt);
  }
  return times;
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  double n = 0.0;
  while (n < 1e-6) {
    for (auto& x : v) {
      x = normal(rng);
    }
    n = norm(v);
  }
  for (auto& x : v) {
    x /= n;
  }
  return v;
}

// Scalar profile with |p| <= 1 on the given sample times.
enum class Profile { constant, sinusoid, step, filtered_noise, switching };
constexpr Profile kProfiles[] = {Profile::constant, Profile::sinusoid, Profile::step, Profile::filtered_noise,
                                 Profile::switching};

const char* profile_name(Profile p) {
  switch (p) {
    case Profile::constant: return "constant";
    case Profile::sinusoid: return "sinusoid";
    case Profile::step: return "step";
    case Profile::filtered_noise: return "filtered-noise";
    case Profile::switching: return "switching";
  }
  return "?";
}

std::vector<double> make_profile(Profile kind, std::mt19937_64& rng, const std::vector<double>& times) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(times.size(), 0.0);
  const double t_end = times.empty() ? 1.0 : std::max(times.back(), 1.0);
  switch (kind) {
    case Profile::constant: {
      const double sign = unit(rng) < 0.2 ? -1.0 : 1.0;
      std::fill(p.begin(), p.end(), sign);
      break;
    }
    case Profile::sinusoid: {
      const double omega = 0.2 + 5.0 * unit(rng);
      const double phase = 2.0 * std::numbers::pi * unit(rng);
      std::transform(times.begin(), times.end(), p.begin(), [&](double t) { return std::sin(omega * t + phase); });
      break;
    }
    case Profile::step: {
      const double at = t_end * unit(rng);
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      std::transform(times.begin(), times.end(), p.begin(), [&](double t) { return t >= at ? sign : 0.0; });
      break;
    }
    case Profile::filtered_noise: {
      const double alpha = 0.05 + 0.5 * unit(rng);
      double state = 0.0;
      for (auto& x : p) {
        state += alpha * ((2.0 * unit(rng) - 1.0) - state);
        x = std::clamp(3.0 * state, -1.0, 1.0);
      }
      break;
    }
    case Profile::switching: {
      double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      double next = times.empty() ? 0.0 : times.front() + 2.0 * unit(rng);
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= next) {
          sign = -sign;
          next = times[i] + 2.0 * unit(rng);
        }
        p[i] = sign;
      }
      break;
    }
  }
  return p;
}

}  // namespace

SampledSignal sample_signal(const SignalFunction& f, std::size_t dim, double t0, double t1, double dt) {
  SampledSignal s;
  const auto first = static_cast<long long>(std::ceil(t0 / dt - 1e-9));
  const auto last = static_cast<long long>(std::floor(t1 / dt + 1e-9));
  for (long long k = first; k <= last; ++k) {
    const double t = static_cast<double>(k) * dt;
    std::vector<double> v(dim, 0.0);
    f(t, v);
    s.times.push_back(t);
    s.values.push_back(std::move(v));
  }
  return s;
}

std::vector<std::vector<double>> run_operator(const InternalOperator& op, const SampledSignal& input) {
  auto instance = op.clone();
  instance->reset();
  std::vector<std::vector<double>> out;
  out.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    instance->push(input.times[i], input.values[i]);
    const auto w = instance->output();
    out.emplace_back(w.begin(), w.end());
  }
  return out;
}

bool probe_causality(const InternalOperator& op, const SampledSignal& z1, const SampledSignal& z2, double t) {
  if (z1.times != z2.times) {
    throw std::invalid_argument("causality probe: inputs must share sample times");
  }
  const auto w1 = run_operator(op, z1);
  const auto w2 = run_operator(op, z2);
  for (std::size_t i = 0; i < z1.size() && z1.times[i] < t; ++i) {
    if (z1.times[i] >= 0.0 && w1[i] != w2[i]) {
      return false;
    }
  }
  return true;
}

CausalityReport probe_causality_trials(const InternalOperator& op, std::size_t trials, std::uint64_t seed,
                                       const ProbeOptions& options) {
  const auto times = probe_times(op.memory(), options.horizon, options.dt);
  const std::size_t dim = op.input_dim();
  std::vector<char> passed(trials, 0);

  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t trial = 0; trial < n; ++trial) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SampledSignal z1;
    z1.times = times;
    std::vector<double> amp(3 * dim), freq(3 * dim), phase(3 * dim);
    for (std::size_t k = 0; k < 3 * dim; ++k) {
      amp[k] = 2.0 * unit(rng) - 1.0;
      freq[k] = 0.1 + 3.0 * unit(rng);
      phase[k] = 2.0 * std::numbers::pi * unit(rng);
    }
    for (double t : times) {
      std::vector<double> v(dim, 0.0);
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t k = 0; k < 3; ++k) {
          const std::size_t idx = 3 * c + k;
          v[c] += amp[idx] * std::sin(freq[idx] * t + phase[idx]);
        }
      }
      z1.values.push_back(std::move(v));
    }

    // Split strictly inside the non-negative part of the grid.
    const auto zero = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), -1e-12) - times.begin());
    std::uniform_int_distribution<std::size_t> pick(zero + 1, times.size() - 1);
    const std::size_t split = pick(rng);
    SampledSignal z2 = z1;
    const double bump = 0.5 + unit(rng);
    for (std::size_t i = split; i < times.size(); ++i) {
      for (auto& x : z2.values[i]) {
        x += bump * (1.0 + std::sin(times[i]));
      }
    }
    bool ok = false;
    try {
      ok = probe_causality(op, z1, z2, times[split]);
    } catch (...) {
      ok = false;
    }
    passed[static_cast<std::size_t>(trial)] = ok ? 1 : 0;
  }

  CausalityReport report;
  report.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    if (passed[i]) {
      ++report.passed;
    } else if (!report.first_failure) {
      report.first_failure = i;
    }
  }
  return report;
}

BiboReport probe_bibo(const InternalOperator& op, double c1, std::size_t trials, std::uint64_t seed,
                      const ProbeOptions& options) {
  if (trials == 0) {
    throw std::invalid_argument("bibo probe needs at least one trial");
  }
  const auto times = probe_times(op.memory(), options.horizon, options.dt);
  const std::size_t dim = op.input_dim();
  std::vector<double> best(trials, 0.0);

  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t trial = 0; trial < n; ++trial) {
    const auto k = static_cast<std::size_t>(trial);
    std::mt19937_64 rng(seed + k);
    const Profile kind = kProfiles[k % std::size(kProfiles)];
    std::vector<double> direction(dim, 0.0);
    if ((k / std::size(kProfiles)) % 2 == 0) {
      direction[0] = 1.0;
    } else {
      direction = random_unit(rng, dim);
    }
    const auto profile = make_profile(kind, rng, times);
    auto instance = op.clone();
    instance->reset();
    double peak = 0.0;
    std::vector<double> zeta(dim);
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (std::size_t c = 0; c < dim; ++c) {
        zeta[c] = c1 * profile[i] * direction[c];
      }
      instance->push(times[i], zeta);
      if (times[i] >= 0.0) {
        peak = std::max(peak, norm(instance->output()));
      }
    }
    best[k] = peak;
  }

  BiboReport report;
  report.c1 = c1;
  report.trials = trials;
  const auto worst = std::max_element(best.begin(), best.end());
  report.c2 = *worst;
  report.worst_profile = profile_name(kProfiles[static_cast<std::size_t>(worst - best.begin()) % std::size(kProfiles)]);
  return report;
}

std::optional<double> lipschitz_ratio(const InternalOperator& op, const SampledSignal& z1, const SampledSignal& z2,
                                      double t, double tau) {
  if (z1.times != z2.times) {
    throw std::invalid_argument("lipschitz probe: inputs must share sample times");
  }
  const auto w1 = run_operator(op, z1);
  const auto w2 = run_operator(op, z2);
  const double tol = 1e-12 * std::max(1.0, t + tau);
  double out_diff = 0.0;
  double in_diff = 0.0;
  std::vector<double> d;
  for (std::size_t i = 0; i < z1.size(); ++i) {
    const double s = z1.times[i];
    if (s < t - tol || s > t + tau + tol) {
      continue;
    }
    d.resize(z1.values[i].size());
    for (std::size_t c = 0; c < d.size(); ++c) {
      d[c] = z1.values[i][c] - z2.values[i][c];
    }
    in_diff = std::max(in_diff, norm(d));
    d.resize(w1[i].size());
    for (std::size_t c = 0; c < d.size(); ++c) {
      d[c] = w1[i][c] - w2[i][c];
    }
    out_diff = std::max(out_diff, norm(d));
  }
  if (in_diff == 0.0) {
    return std::nullopt;
  }
  return out_diff / in_diff;
}

LipschitzReport probe_lipschitz(const InternalOperator& op, const SignalFunction& base, double t, double tau,
                                double delta, std::size_t trials, std::uint64_t seed, double dt) {
  if (!(tau > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("lipschitz probe needs tau > 0 and delta > 0");
  }
  const std::size_t dim = op.input_dim();
  const auto times = probe_times(op.memory(), t + tau, dt);
  std::vector<double> anchor(dim, 0.0);
  base(t, anchor);

  std::vector<std::optional<double>> ratios(trials);
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t trial = 0; trial < n; ++trial) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    SampledSignal pair[2];
    for (auto& z : pair) {
      const Profile kind = kProfiles[1 + rng() % (std::size(kProfiles) - 1)];
      const auto direction = random_unit(rng, dim);
      const auto profile = make_profile(kind, rng, times);
      z.times = times;
      for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> v(dim, 0.0);
        if (times[i] <= t) {
          base(times[i], v);
        } else {
          for (std::size_t c = 0; c < dim; ++c) {
            v[c] = anchor[c] + 0.99 * delta * profile[i] * direction[c];
          }
        }
        z.values.push_back(std::move(v));
      }
    }
    try {
      ratios[static_cast<std::size_t>(trial)] = lipschitz_ratio(op, pair[0], pair[1], t, tau);
    } catch (...) {
      ratios[static_cast<std::size_t>(trial)] = std::nullopt;
    }
  }

  LipschitzReport report;
  report.trials = trials;
  for (const auto& r : ratios) {
    if (r) {
      report.estimate = std::max(report.estimate, *r);
    } else {
      ++report.skipped;
    }
  }
  return report;
}

}  // namespace funnelsim
