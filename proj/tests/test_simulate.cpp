#include <doctest.h>

#include <cmath>
#include <random>

#include "funnelsim/config.hpp"
#include "funnelsim/errors.hpp"
#include "funnelsim/simulate.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace funnelsim;

namespace {

Scenario dirac_scenario(double dt, double horizon) {
  auto sc = testing_scenarios::affine_lti(1, 0.0, 0.0, 1.0, 1.0,
                                          std::make_shared<ConvolutionOperator>(Measure::dirac(0.0)),
                                          ReferenceSignal(CosineReference{}),
                                          {FunnelFunction::exp_shift(2, 2, 0.1)}, {0.0});
  sc.plant.disturbance = Disturbance{};
  sc.plant.drift = AffineDrift{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  sc.dt = dt;
  sc.horizon = horizon;
  return sc;
}

}  // namespace

TEST_CASE("rhs") {
  Plant p;
  p.internal = std::make_shared<ZeroOperator>();
  p.drift = AffineDrift{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  p.gain = Eigen::MatrixXd(Eigen::MatrixXd::Ones(1, 1));
  p.initial_state = {0.0};
  p.validate();
  const std::vector<double> w{0.0}, u{-2.5};
  CHECK(rhs(p, 0.3, w, u)[0] == doctest::Approx(-2.5));
  const std::vector<double> w2{0.75};
  CHECK(rhs(p, 0.3, w2, u)[0] == doctest::Approx(-1.75));

  p.gain = Eigen::MatrixXd(Eigen::MatrixXd::Constant(1, 1, -1.0));
  CHECK_THROWS_AS(p.validate(), GainDegenerate);
  p.gain = GainCallback([](const Eigen::VectorXd&, const Eigen::VectorXd& wv) {
    return Eigen::MatrixXd::Constant(1, 1, 1.0 - wv[0]);
  });
  CHECK(rhs(p, 0.0, w, u)[0] == doctest::Approx(-2.5));
  const std::vector<double> w_bad{1.0};
  CHECK_THROWS_AS(rhs(p, 0.0, w_bad, u), GainDegenerate);
}

TEST_CASE("initial condition on the funnel boundary is rejected") {
  auto sc = dirac_scenario(0.01, 1.0);
  sc.plant.initial_state = {1.0 + 2.1};  // |e(0)| = 1 / phi(0)
  CHECK_THROWS_AS(simulate(sc), InadmissibleInitialCondition);
  sc.plant.initial_state = {1.0 + 2.0};
  CHECK_NOTHROW(simulate(sc));
}

TEST_CASE("delta_0 loop matches a dense reference integration") {
  const auto result = simulate(dirac_scenario(1e-3, 10.0));
  const auto ref = oracle::dirac_closed_loop(2, 2, 0.1, 1e-3, 10.0, 100);
  REQUIRE(result.trace.size() == ref.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    worst = std::max(worst, std::abs(result.trace[i].y[0] - ref[i]));
  }
  CHECK(worst <= 1e-3);
  CHECK(result.report.completed);
  CHECK(verify_run(result.trace, result.report).passed());
}

TEST_CASE("trace rows sit on the time grid and decimation keeps the last row") {
  auto sc = dirac_scenario(0.01, 1.005);
  sc.decimation = 7;
  const auto result = simulate(sc);
  CHECK(result.trace.front().t == 0.0);
  CHECK(result.trace.back().t == 1.005);
  for (std::size_t i = 1; i + 1 < result.trace.size(); ++i) {
    CHECK(result.trace[i].t == doctest::Approx(0.07 * static_cast<double>(i)));
  }
  CHECK(result.trace.size() == 1 + 101 / 7 + 1);
}

TEST_CASE("identical scenarios give bitwise identical traces") {
  std::mt19937_64 rng(99);
  const auto sc = testing_scenarios::random_lti_scenario(rng, 2);
  const auto a = simulate(sc), b = simulate(sc);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].y == b.trace[i].y);
    CHECK(a.trace[i].u == b.trace[i].u);
    CHECK(a.trace[i].w == b.trace[i].w);
  }
}

TEST_CASE("random scenarios stay inside every funnel") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t r = 1 + static_cast<std::size_t>(trial % 3);
    const auto sc = testing_scenarios::random_lti_scenario(rng, r);
    const auto result = simulate(sc);
    for (const auto& row : result.trace) {
      for (std::size_t i = 0; i < r; ++i) {
        CHECK(row.error_norms[i] < row.radii[i]);
      }
    }
    const auto verdict = verify_run(result.trace, result.report);
    CHECK((verdict.passed() || !result.report.completed));
  }
}

TEST_CASE("verify_run clauses") {
  const auto result = simulate(dirac_scenario(1e-3, 2.0));
  auto verdict = verify_run(result.trace, result.report);
  REQUIRE(verdict.passed());
  CHECK(verdict.epsilon[0] > 0.0);

  auto corrupted = result.trace;
  corrupted[500].error_norms[0] = corrupted[500].radii[0];
  verdict = verify_run(corrupted, result.report);
  CHECK_FALSE(verdict.inside_funnels);
  CHECK(verdict.worst_row == 500);
  CHECK(verdict.horizon_reached);

  verdict = verify_run(result.trace, result.report, VerifyOptions{1e-3, 1e3});
  CHECK_FALSE(verdict.bounded);

  // A base step far too coarse for the loop, with no halvings allowed.
  auto coarse = dirac_scenario(0.5, 5.0);
  coarse.max_halvings = 0;
  const auto collapsed = simulate(coarse);
  CHECK_FALSE(collapsed.report.completed);
  CHECK_FALSE(collapsed.report.failure.empty());
  verdict = verify_run(collapsed.trace, collapsed.report);
  CHECK_FALSE(verdict.horizon_reached);
  for (const auto& row : collapsed.trace) {
    CHECK(row.error_norms[0] < row.radii[0]);
  }
}

TEST_CASE("rejected steps are retried with halved sub-steps") {
  auto sc = dirac_scenario(0.05, 3.0);
  const auto result = simulate(sc);
  CHECK(result.report.completed);
  CHECK(result.report.rejections > 0);
  CHECK(result.report.steps > 60);
  CHECK(result.trace.size() == 61);
}

TEST_CASE("step-size convergence on the transport scenario") {
  for (const auto integrator : {Integrator::euler, Integrator::rk4}) {
    std::vector<double> sup;
    for (double dt : {0.003, 0.0015, 0.00075, 0.000375}) {
      ConfigOverrides o;
      o.dt = dt;
      o.horizon = 2.0;
      o.integrator = integrator;
      const auto loaded = load_scenario("paper-sec4", o);
      const auto result = simulate(loaded.scenario);
      REQUIRE(result.report.completed);
      double s = 0.0;
      for (const auto& row : result.trace) s = std::max(s, std::abs(row.y[0]));
      sup.push_back(s);
    }
    const double d1 = std::abs(sup[1] - sup[0]), d2 = std::abs(sup[2] - sup[1]), d3 = std::abs(sup[3] - sup[2]);
    CAPTURE(d1);
    CAPTURE(d2);
    CAPTURE(d3);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
  }
}
