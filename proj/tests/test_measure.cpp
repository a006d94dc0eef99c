#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "funnelsim/measure.hpp"
#include "oracles.hpp"

using namespace funnelsim;

TEST_CASE("singular density integrates exactly after substitution") {
  const auto g = Density::exp_sqrt();
  CHECK(g.singular());
  CHECK(g.integral(0, 1) == doctest::Approx(oracle::expsqrt_mass(1)).epsilon(1e-9));
  CHECK(g.integral(0.25, 4) == doctest::Approx(oracle::expsqrt_mass(4) - oracle::expsqrt_mass(0.25)).epsilon(1e-8));
  CHECK(g.analytic_mass().value() == doctest::Approx(std::sqrt(std::acos(-1.0))));
  CHECK(g.tail(10) == doctest::Approx(std::sqrt(std::acos(-1.0)) * std::erfc(std::sqrt(10.0))).epsilon(1e-12));
  CHECK(g(1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("exponential and grid densities") {
  const auto e = Density::exponential(2.0);
  CHECK(e.integral(0, 3) == doctest::Approx((1 - std::exp(-6.0)) / 2).epsilon(1e-8));
  CHECK(e.tail(1) == doctest::Approx(std::exp(-2.0) / 2));

  const auto g = Density::grid({0, 1, 2}, {1, -1, 1});
  CHECK(g(0.5) == doctest::Approx(0));
  CHECK(g(3.0) == 0.0);
  CHECK(g.integral(0, 2) == doctest::Approx(0).scale(1));
  CHECK(g.abs_integral(0, 2) == doctest::Approx(1.0));
  CHECK_THROWS(Density::grid({0, 0}, {1, 1}));
  CHECK_THROWS(Density::grid({0}, {1}));
}

TEST_CASE("density file") {
  const auto path = std::filesystem::path(FUNNELSIM_TEST_DATA) / "triangle_density.txt";
  const auto g = Density::from_file(path);
  CHECK(g(0.5) == doctest::Approx(0.75));
  CHECK(g.integral(0, 2) == doctest::Approx(1.0));
  CHECK_THROWS(Density::from_file("/nonexistent/density.txt"));
}

TEST_CASE("measure invariants") {
  const Measure m({{2.0, 1.0}, {0.5, -0.5}}, std::nullopt);
  REQUIRE(m.atoms().size() == 2);
  CHECK(m.atoms()[0].location == 0.5);
  CHECK(m.total_variation() == doctest::Approx(1.5));
  CHECK_THROWS(Measure({{1.0, 1.0}, {1.0, 2.0}}, std::nullopt));
  CHECK_THROWS(Measure({{-1.0, 1.0}}, std::nullopt));

  const Measure sec4({}, Density::exp_sqrt());
  CHECK(sec4.total_variation() == doctest::Approx(1.7724538509));
  CHECK(sec4.tail_mass(10) < 2e-5);
  CHECK(Measure().empty());
}

TEST_CASE("atom parsing") {
  const auto atoms = parse_atoms("0:1, 0.5:-2");
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[1].location == 0.5);
  CHECK(atoms[1].weight == -2);
  CHECK_THROWS(parse_atoms("0.5"));
  CHECK_THROWS(parse_atoms("a:b"));
}
