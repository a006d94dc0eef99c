#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "funnelsim/jet.hpp"

namespace funnelsim {

inline constexpr double kDefaultGainGuard = 1e-12;

// phi(t) = 1 / (a exp(-b t) + c); the funnel radius 1/phi shrinks from a + c to c.
struct ExpShift {
  double a;
  double b;
  double c;
};

// phi(t) = 1 / lambda; constant radius lambda.
struct ConstantFunnel {
  double lambda;
};

// Analytic callbacks for phi, phi', ..., phi^(k).
struct GeneralFunnel {
  std::vector<std::function<double(double)>> derivatives;
};

class FunnelFunction {
public:
  static FunnelFunction exp_shift(double a, double b, double c);
  static FunnelFunction constant(double lambda);
  static FunnelFunction general(std::vector<std::function<double(double)>> derivatives);

  double value(double t) const;
  /// Radius 1/phi(t); +inf where phi vanishes.
  double radius(double t) const;
  /// Highest derivative order available; nullopt means unbounded.
  std::optional<std::size_t> max_order() const;
  /// Guaranteed lower bound on 1/phi over t >= 0, if known structurally.
  std::optional<double> radius_lower_bound() const;
  std::string describe() const;

  const auto& family() const noexcept { return family_; }

private:
  using Family = std::variant<ExpShift, ConstantFunnel, GeneralFunnel>;
  explicit FunnelFunction(Family f) : family_(std::move(f)) {}
  Family family_;
};

/// Jet of (phi(t), phi'(t), ..., phi^(k)(t)); exact for the built-in families.
Jet phi_jet(const FunnelFunction& phi, double t, std::size_t k);

/// 1 - phi(t) |e|; positive iff (t, e) lies inside the funnel.
double funnel_margin(const FunnelFunction& phi, double t, std::span<const double> e);

/// Gain jet k = 1 / (1 - phi^2 |e|^2). Throws FunnelViolation when the
/// denominator value is below `guard`; `stage` is reported in the exception.
Jet gain(const Jet& phi, const Jet& e, double guard = kDefaultGainGuard, std::size_t stage = 0);

// phi_0 in Phi_r, phi_1 in Phi_{r-1}, ..., phi_{r-1} in Phi_1.
struct FunnelStack {
  std::vector<FunnelFunction> functions;

  std::size_t size() const noexcept { return functions.size(); }
  const FunnelFunction& operator[](std::size_t i) const { return functions[i]; }
  /// Throws std::invalid_argument unless the stack fits relative degree r.
  void validate(std::size_t r) const;
};

}  // namespace funnelsim
