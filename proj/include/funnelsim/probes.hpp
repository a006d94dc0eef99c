#pragma once

// Empirical checks of the operator conditions. These estimate; they never prove.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "funnelsim/operators.hpp"

namespace funnelsim {

struct SampledSignal {
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  std::size_t size() const noexcept { return times.size(); }
};

using SignalFunction = std::function<void(double, std::span<double>)>;

/// Samples f at t = k dt for every integer k with t in [t0, t1].
SampledSignal sample_signal(const SignalFunction& f, std::size_t dim, double t0, double t1, double dt);

/// Feeds a fresh clone of `op` with `input`; returns the output after each sample.
std::vector<std::vector<double>> run_operator(const InternalOperator& op, const SampledSignal& input);

struct ProbeOptions {
  double dt = 0.01;
  double horizon = 10.0;
};

/// Inputs must share sample times. True iff the outputs at every sample time
/// in [0, t) agree bit for bit; a causality test when the inputs agree before t.
bool probe_causality(const InternalOperator& op, const SampledSignal& z1, const SampledSignal& z2, double t);

struct CausalityReport {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::optional<std::size_t> first_failure;

  bool ok() const noexcept { return passed == trials; }
};

/// Random inputs that agree up to a random split time and differ afterwards.
CausalityReport probe_causality_trials(const InternalOperator& op, std::size_t trials, std::uint64_t seed,
                                       const ProbeOptions& options = {});

struct BiboReport {
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t trials = 0;
  std::string worst_profile;
};

/// Largest output norm seen over random inputs with sup-norm at most c1
/// (a mix of constant, periodic and noisy profiles).
BiboReport probe_bibo(const InternalOperator& op, double c1, std::size_t trials, std::uint64_t seed,
                      const ProbeOptions& options = {});

/// sup_[t, t+tau] |T z1 - T z2| / sup_[t, t+tau] |z1 - z2|; nullopt when the
/// input difference vanishes on the window.
std::optional<double> lipschitz_ratio(const InternalOperator& op, const SampledSignal& z1, const SampledSignal& z2,
                                      double t, double tau);

struct LipschitzReport {
  double estimate = 0.0;
  std::size_t trials = 0;
  std::size_t skipped = 0;
};

/// Perturbs `base` within delta of base(t) on [t, t + tau], pairwise.
LipschitzReport probe_lipschitz(const InternalOperator& op, const SignalFunction& base, double t, double tau,
                                double delta, std::size_t trials, std::uint64_t seed, double dt = 0.01);

}  // namespace funnelsim
