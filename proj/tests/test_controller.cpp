#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "funnelsim/controller.hpp"
#include "funnelsim/errors.hpp"
#include "funnelsim/reference.hpp"

using namespace funnelsim;

namespace {

ControllerConfig constant_funnels(std::size_t r, double lambda = 1.0) {
  ControllerConfig cfg;
  cfg.relative_degree = r;
  for (std::size_t i = 0; i < r; ++i) {
    cfg.funnels.functions.push_back(FunnelFunction::constant(lambda));
  }
  return cfg;
}

}  // namespace

TEST_CASE("relative degree one reduces to u = -e / (1 - phi^2 e^2)") {
  const auto cfg = constant_funnels(1);
  const auto out = controller_eval(cfg, 0.0, Jet::vector({{0.5}}));
  CHECK(out.u[0] == doctest::Approx(-2.0 / 3.0));

  ControllerConfig exp_cfg;
  exp_cfg.funnels.functions.push_back(FunnelFunction::exp_shift(2, 2, 0.1));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double t = 5 * u(rng);
    const double phi = 1 / (2 * std::exp(-2 * t) + 0.1);
    const double e = (2 * u(rng) - 1) * 0.999 / phi;
    const auto res = controller_eval(exp_cfg, t, Jet::vector({{e}}));
    CHECK(res.u[0] == doctest::Approx(-e / (1 - phi * phi * e * e)).epsilon(1e-12));
  }
}

TEST_CASE("perfect tracking is a fixed point") {
  const auto cfg = constant_funnels(3);
  const auto out = controller_eval(cfg, 1.0, Jet(2, 2));
  CHECK(out.u == std::vector<double>{0.0, 0.0});
  for (double k : out.gains) {
    CHECK(k == 1.0);
  }
  for (const auto& e : out.errors) {
    CHECK(e == std::vector<double>{0.0, 0.0});
  }
}

TEST_CASE("relative degree two by hand") {
  const auto cfg = constant_funnels(2);
  const auto out = controller_eval(cfg, 0.0, Jet::vector({{0.1}, {0.0}}));
  const double k0 = 1 / (1 - 0.01);
  const double e1 = k0 * 0.1;
  CHECK(out.errors[1][0] == doctest::Approx(e1));
  CHECK(out.u[0] == doctest::Approx(-e1 / (1 - e1 * e1)));
  CHECK(out.u[0] == doctest::Approx(-0.102051).epsilon(1e-5));
}

TEST_CASE("relative degree two with time-varying funnels matches the expanded formula") {
  // e1 = e' + k0 e with k0 = 1/(1 - phi0^2 e^2); u = -k1 e1.
  ControllerConfig cfg;
  cfg.relative_degree = 2;
  cfg.funnels.functions = {FunnelFunction::exp_shift(1, 1.5, 0.5), FunnelFunction::exp_shift(4, 1, 1)};
  const double t = 0.3, e = 0.4, de = -0.7;
  const auto out = controller_eval(cfg, t, Jet::vector({{e}, {de}}));
  const double phi0 = 1 / (std::exp(-1.5 * t) + 0.5);
  const double phi1 = 1 / (4 * std::exp(-t) + 1);
  const double k0 = 1 / (1 - phi0 * phi0 * e * e);
  const double e1 = de + k0 * e;
  const double k1 = 1 / (1 - phi1 * phi1 * e1 * e1);
  CHECK(out.gains[0] == doctest::Approx(k0));
  CHECK(out.gains[1] == doctest::Approx(k1));
  CHECK(out.u[0] == doctest::Approx(-k1 * e1));
}

TEST_CASE("relative degree three uses the derivative of k0") {
  // e1 = e' + k0 e, e1' = e'' + k0' e + k0 e', k0' = 2 k0^2 phi^2 e e' for constant phi.
  const auto cfg = constant_funnels(3, 2.0);
  const double phi = 0.5, e = 0.3, de = 0.2, dde = -0.1;
  const auto out = controller_eval(cfg, 0.0, Jet::vector({{e}, {de}, {dde}}));
  const double k0 = 1 / (1 - phi * phi * e * e);
  const double dk0 = 2 * k0 * k0 * phi * phi * e * de;
  const double e1 = de + k0 * e;
  const double de1 = dde + dk0 * e + k0 * de;
  const double k1 = 1 / (1 - phi * phi * e1 * e1);
  const double e2 = de1 + k1 * e1;
  const double k2 = 1 / (1 - phi * phi * e2 * e2);
  CHECK(out.errors[2][0] == doctest::Approx(e2));
  CHECK(out.u[0] == doctest::Approx(-k2 * e2));
}

TEST_CASE("violations report their stage") {
  const auto cfg = constant_funnels(2);
  CHECK_THROWS_AS(controller_eval(cfg, 0.0, Jet::vector({{1.0}, {0.0}})), FunnelViolation);
  try {
    controller_eval(cfg, 0.0, Jet::vector({{0.5}, {2.0}}));
    FAIL("expected a violation");
  } catch (const FunnelViolation& v) {
    CHECK(v.stage() == 1);
  }
  CHECK_THROWS_AS(controller_eval(cfg, 0.0, Jet::vector({{0.1}})), std::invalid_argument);
}

TEST_CASE("gains move continuously along a smooth trajectory") {
  ControllerConfig cfg;
  cfg.relative_degree = 2;
  cfg.funnels.functions = {FunnelFunction::exp_shift(2, 1, 0.5), FunnelFunction::exp_shift(4, 1, 1)};
  auto eval = [&](double t) {
    const double e = 0.3 * std::cos(t), de = -0.3 * std::sin(t);
    return controller_eval(cfg, t, Jet::vector({{e}, {de}}));
  };
  double prev_diff = 1e9;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto a = eval(1.0), b = eval(1.0 + dt);
    const double diff = std::abs(a.u[0] - b.u[0]);
    CHECK(diff < prev_diff);
    prev_diff = diff;
  }
  CHECK(prev_diff < 0.01);
}

TEST_CASE("reference jets") {
  const Jet c = reference_jet(ReferenceSignal(CosineReference{1, 1, 0}), 0.0, 2);
  CHECK(c[0] == doctest::Approx(1));
  CHECK(c[1] == doctest::Approx(0).scale(1));
  CHECK(c[2] == doctest::Approx(-1));

  const Jet k = reference_jet(ReferenceSignal(ConstantReference{4.5}), 2.0, 3);
  CHECK(k[0] == 4.5);
  CHECK(k[3] == 0.0);

  const Jet p = reference_jet(ReferenceSignal(PolynomialReference{{0, 0, 1}}), 3.0, 2);
  CHECK(p[0] == doctest::Approx(9));
  CHECK(p[1] == doctest::Approx(6));
  CHECK(p[2] == doctest::Approx(2));

  const Jet s = reference_jet(ReferenceSignal(CosineReference{2, 3, std::numbers::pi / 4}), 0.7, 3);
  const double arg = 3 * 0.7 + std::numbers::pi / 4;
  CHECK(s[1] == doctest::Approx(-6 * std::sin(arg)));
  CHECK(s[3] == doctest::Approx(54 * std::sin(arg)));

  GeneralReference g{{[](double t) { return t; }}};
  CHECK_THROWS(reference_jet(ReferenceSignal(g), 0.0, 1));

  const Jet v = reference_jet(ReferenceSignal(std::vector<ReferenceComponent>{ConstantReference{1}, CosineReference{}}),
                              0.0, 1);
  CHECK(v.dim() == 2);
  CHECK(v(0, 1) == doctest::Approx(1));
}
