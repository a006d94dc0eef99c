// Acceptance checks: one [PASS]/[FAIL] line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "funnelsim/config.hpp"
#include "funnelsim/errors.hpp"
#include "funnelsim/funnel.hpp"
#include "funnelsim/jet.hpp"
#include "funnelsim/linear.hpp"
#include "funnelsim/probes.hpp"
#include "funnelsim/simulate.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace funnelsim;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void guarded(int id, const std::string& title, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

double max_abs_diff_y(const SimulationResult& a, const SimulationResult& b) {
  double worst = a.trace.size() == b.trace.size() ? 0.0 : kInf;
  for (std::size_t i = 0; i < std::min(a.trace.size(), b.trace.size()); ++i) {
    worst = std::max(worst, std::abs(a.trace[i].y[0] - b.trace[i].y[0]));
  }
  return worst;
}

void criterion1() {
  const auto loaded = load_scenario("paper-sec4");
  const auto start = std::chrono::steady_clock::now();
  const auto result = simulate(loaded.scenario);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto verdict = verify_run(result.trace, result.report, loaded.caps);
  double max_ratio = 0.0;
  for (const auto& row : result.trace) {
    max_ratio = std::max(max_ratio, row.error_norms[0] / row.radii[0]);
  }
  const bool ok = result.report.completed && verdict.passed() && result.trace.back().t == 15.0 &&
                  max_ratio <= 0.99 && verdict.max_u <= 100 && verdict.max_gain <= 100 && wall <= 10.0;
  report(1, "paper-sec4 stays inside the funnel over [0, 15]", ok,
         fmt("max phi|e| = %.4f, sup|u| = %.3f, sup k0 = %.3f, wall = %.2f s", max_ratio, verdict.max_u,
             verdict.max_gain, wall));
}

void criterion2() {
  auto run = [](const char* realization, double dt) {
    ConfigOverrides o;
    o.realization = realization;
    if (dt > 0) o.dt = dt;
    return simulate(load_scenario("paper-sec4", o).scenario);
  };
  const double dt = load_scenario("paper-sec4").scenario.dt;
  const double coarse = max_abs_diff_y(run("transport", 0), run("convolution", 0));
  const double fine = max_abs_diff_y(run("transport", dt / 2), run("convolution", dt / 2));
  const double ratio = coarse / fine;
  report(2, "transport and convolution realizations agree and converge", coarse <= 5e-2 && ratio >= 1.7,
         fmt("max|dy| = %.3e at dt, %.3e at dt/2, ratio %.3f", coarse, fine, ratio));
}

void criterion3() {
  const auto loaded = load_scenario("dirac0");
  const auto& sc = loaded.scenario;
  const auto result = simulate(sc);
  const auto ref = oracle::dirac_closed_loop(2, 2, 0.1, sc.dt, sc.horizon, 100);
  double worst = result.report.completed ? 0.0 : kInf;
  for (const auto& row : result.trace) {
    const auto k = static_cast<std::size_t>(std::llround(row.t / sc.dt));
    worst = std::max(worst, std::abs(row.y[0] - ref[k]));
  }
  report(3, "dirac0 matches a dt/100 RK4 integration of y' = y + u", worst <= 1e-4,
         fmt("max|dy| = %.3e over %.0f rows", worst, static_cast<double>(result.trace.size())));
}

void criterion4() {
  const auto loaded = load_scenario("delay");
  const auto result = simulate(loaded.scenario);
  const auto lag = static_cast<std::size_t>(std::llround(0.5 / loaded.scenario.dt));
  double worst = result.report.completed ? 0.0 : kInf;
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const double expected = i < lag ? 0.0 : result.trace[i - lag].y[0];
    worst = std::max(worst, std::abs(result.trace[i].w[0] - expected));
  }
  report(4, "delay output equals the shifted input", worst <= 1e-6, fmt("max error = %.3e", worst));
}

void criterion5() {
  const ConvolutionOperator op(Measure({}, Density::exp_sqrt()));
  const auto input = sample_signal([](double, std::span<double> v) { v[0] = 1.0; }, 1, 0.0, 1.0, 0.01);
  const double value = run_operator(op, input).back()[0];
  const double exact = oracle::expsqrt_mass(1.0);
  report(5, "singular convolution at t = 1 equals sqrt(pi) erf(1)",
         std::abs(value - exact) <= 1e-4 && std::abs(value - 1.49365) <= 1e-4,
         fmt("value = %.10f, closed form = %.10f", value, exact));
}

void criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> where(-1, 1), scalar(-3, 3);
  double worst = 0.0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const auto p = oracle::random_polynomial(rng, 0.2, 2.0);  // >= 0.8 on [-1, 1]
    const auto q = oracle::random_polynomial(rng);
    const double t0 = where(rng), s = scalar(rng);
    Jet jp(3, 1), jq(3, 1), vec(3, 2);
    for (std::size_t j = 0; j <= 3; ++j) {
      jp[j] = p.derivative(static_cast<int>(j), t0);
      jq[j] = q.derivative(static_cast<int>(j), t0);
      vec(j, 0) = jp[j];
      vec(j, 1) = jq[j];
    }
    const Jet sum = jet_add(jp, jq), diff = jet_sub(jp, jq), prod = jet_mul(jp, jq), inv = jet_reciprocal(jp),
              sq = jet_sqnorm(vec), scaled = jet_scale(s, jp), der = jet_derivative(jet_mul(jp, jq));
    auto check = [&](const Jet& jet, const std::function<long double(long double)>& f, std::size_t top) {
      for (std::size_t k = 0; k <= top; ++k) {
        worst = std::max(worst, oracle::relative_error(jet[k], oracle::central_difference(f, t0, static_cast<int>(k))));
      }
    };
    check(sum, [&](long double t) { return p(t) + q(t); }, 3);
    check(diff, [&](long double t) { return p(t) - q(t); }, 3);
    check(prod, [&](long double t) { return p(t) * q(t); }, 3);
    check(inv, [&](long double t) { return 1 / p(t); }, 3);
    check(sq, [&](long double t) { return p(t) * p(t) + q(t) * q(t); }, 3);
    check(scaled, [&](long double t) { return s * p(t); }, 3);
    // d/dt (p q) as a jet of order 2: entries are derivatives 1..3 of p q.
    for (std::size_t k = 0; k <= 2; ++k) {
      worst = std::max(worst, oracle::relative_error(
                                  der[k], oracle::central_difference([&](long double t) { return p(t) * q(t); }, t0,
                                                                     static_cast<int>(k + 1))));
    }
  }
  report(6, "jet operations match finite differences", worst <= 1e-6,
         fmt("%.0f trials, worst relative error = %.3e", trials, worst));
}

void criterion7() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  auto u = [](double t) { return std::sin(1.3 * t) + 0.5 * std::cos(0.4 * t); };
  double worst = 0.0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    const int r = 1 + trial % 2;
    const auto t = oracle::random_triple(rng, 4, r);
    const LinearTriple sys{t.A, t.b, t.c};
    const Eigen::VectorXd x0 = Eigen::VectorXd::NullaryExpr(4, [&] { return normal(rng); });
    const auto form = bi_transform(sys);
    if (form.relative_degree != static_cast<std::size_t>(r)) {
      worst = kInf;
      break;
    }
    const auto y_orig = simulate_triple(sys, x0, u, 10.0, 0.01);
    const auto y_bi = simulate_bi_form(form, x0, u, 10.0, 0.01);
    worst = std::max(worst, (y_orig - y_bi).lpNorm<Eigen::Infinity>());
  }
  report(7, "Byrnes-Isidori form reproduces the original output", worst <= 1e-6,
         fmt("%.0f triples, max|dy| = %.3e", trials, worst));
}

void criterion8() {
  std::mt19937_64 rng(8);
  const int trials = 120;
  int passed = 0, collapsed = 0, other = 0;
  std::size_t violating_rows = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t r = 1 + static_cast<std::size_t>(trial % 3);
    const auto sc = testing_scenarios::random_lti_scenario(rng, r);
    const auto result = simulate(sc);
    for (const auto& row : result.trace) {
      for (std::size_t i = 0; i < r; ++i) {
        violating_rows += row.error_norms[i] < row.radii[i] ? 0 : 1;
      }
    }
    if (!result.report.completed) {
      ++collapsed;
    } else if (verify_run(result.trace, result.report).passed()) {
      ++passed;
    } else {
      ++other;
    }
  }
  report(8, "random LTI scenarios never leave a funnel", other == 0 && violating_rows == 0,
         fmt("%.0f scenarios: %.0f verified, %.0f step collapse, %.0f violating rows", trials, passed, collapsed,
             static_cast<double>(violating_rows) + other));
}

void criterion9() {
  std::vector<std::unique_ptr<InternalOperator>> ops;
  ops.push_back(std::make_unique<ZeroOperator>());
  ops.push_back(std::make_unique<ConvolutionOperator>(Measure({{0.5, 1.0}}, Density::exp_sqrt())));
  TransportOptions topts;
  topts.truncation = 10;
  ops.push_back(std::make_unique<TransportPDE>(Measure({{0.5, 1.0}}, Density::exp_sqrt()), 1, topts));
  Eigen::MatrixXd Q(2, 2), R(2, 1), S(1, 2);
  Q << -1, 1, 0, -2;
  R << 1, 0.5;
  S << 1, -1;
  ops.push_back(std::make_unique<LTIInternal>(Q, R, S, Eigen::VectorXd::Zero(2)));
  ObservationMap F;
  F.f1 = {1};
  F.f2 = {0.5};
  F.f3 = {1};
  ops.push_back(std::make_unique<ComposedOperator>(Passthrough{Passthrough::Kind::delay, 0.3},
                                                   std::make_unique<LTIInternal>(Q, R, S, Eigen::VectorXd::Zero(2)),
                                                   StateMap{StateMap::Kind::tanh_linear, {1, 1}}, F));
  std::string detail;
  bool ok = true;
  for (const auto& op : ops) {
    const auto rep = probe_causality_trials(*op, 100, 9, ProbeOptions{0.01, 5.0});
    ok = ok && rep.ok() && rep.trials == 100;
    detail += std::string(op->kind()) + " " + std::to_string(rep.passed) + "/" + std::to_string(rep.trials) + "; ";
  }
  detail.resize(detail.size() - 2);
  report(9, "causality probe passes for every operator variant", ok, detail);
}

void criterion10() {
  const auto loaded = load_scenario("paper-sec4");
  const auto rep = probe_bibo(*loaded.op, 1.0, 20, 10, ProbeOptions{loaded.scenario.dt, loaded.scenario.horizon});
  const double bound = std::sqrt(std::acos(-1.0)) + 0.05;
  report(10, "BIBO estimate for the singular measure stays below its total variation", rep.c2 <= bound,
         fmt("c2 = %.6f, bound = %.6f", rep.c2, bound));
}

}  // namespace

int main() {
  guarded(1, "paper-sec4 stays inside the funnel over [0, 15]", criterion1);
  guarded(2, "transport and convolution realizations agree and converge", criterion2);
  guarded(3, "dirac0 matches a dt/100 RK4 integration of y' = y + u", criterion3);
  guarded(4, "delay output equals the shifted input", criterion4);
  guarded(5, "singular convolution at t = 1 equals sqrt(pi) erf(1)", criterion5);
  guarded(6, "jet operations match finite differences", criterion6);
  guarded(7, "Byrnes-Isidori form reproduces the original output", criterion7);
  guarded(8, "random LTI scenarios never leave a funnel", criterion8);
  guarded(9, "causality probe passes for every operator variant", criterion9);
  guarded(10, "BIBO estimate for the singular measure stays below its total variation", criterion10);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
