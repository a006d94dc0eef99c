#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "funnelsim/jet.hpp"

namespace funnelsim {

// amp * cos(omega t + phase)
struct CosineReference {
  double amp = 1.0;
  double omega = 1.0;
  double phase = 0.0;
};

// sum_i coeffs[i] t^i
struct PolynomialReference {
  std::vector<double> coeffs;
};

struct ConstantReference {
  double value = 0.0;
};

struct GeneralReference {
  std::vector<std::function<double(double)>> derivatives;
};

using ReferenceComponent = std::variant<CosineReference, PolynomialReference, ConstantReference, GeneralReference>;

// One scalar reference per output channel.
struct ReferenceSignal {
  std::vector<ReferenceComponent> components;

  ReferenceSignal() = default;
  explicit ReferenceSignal(ReferenceComponent c) : components{std::move(c)} {}
  explicit ReferenceSignal(std::vector<ReferenceComponent> cs) : components(std::move(cs)) {}

  std::size_t dim() const noexcept { return components.size(); }
};

/// Exact derivative jet (y_ref, y_ref', ..., y_ref^(k)) at t.
Jet reference_jet(const ReferenceSignal& ref, double t, std::size_t k);

}  // namespace funnelsim
