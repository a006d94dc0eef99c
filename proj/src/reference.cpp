#include "funnelsim/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace funnelsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double derivative(const ReferenceComponent& c, double t, std::size_t j) {
  return std::visit(
      overloaded{
          [&](const CosineReference& r) {
            // d^j/dt^j cos(x) = cos(x + j pi/2)
            const double shift = static_cast<double>(j) * std::numbers::pi / 2.0;
            return r.amp * std::pow(r.omega, static_cast<double>(j)) * std::cos(r.omega * t + r.phase + shift);
          },
          [&](const PolynomialReference& r) {
            double acc = 0.0;
            for (std::size_t i = r.coeffs.size(); i-- > j;) {
              double falling = 1.0;
              for (std::size_t q = 0; q < j; ++q) {
                falling *= static_cast<double>(i - q);
              }
              acc = acc * t + r.coeffs[i] * falling;
            }
            return acc;
          },
          [&](const ConstantReference& r) { return j == 0 ? r.value : 0.0; },
          [&](const GeneralReference& r) {
            if (j >= r.derivatives.size()) {
              throw std::invalid_argument("general reference: derivative order " + std::to_string(j) +
                                          " not provided");
            }
            return r.derivatives[j](t);
          },
      },
      c);
}

}  // namespace

Jet reference_jet(const ReferenceSignal& ref, double t, std::size_t k) {
  if (ref.components.empty()) {
    throw std::invalid_argument("reference signal has no components");
  }
  Jet out(k, ref.dim());
  for (std::size_t c = 0; c < ref.dim(); ++c) {
    for (std::size_t j = 0; j <= k; ++j) {
      out(j, c) = derivative(ref.components[c], t, j);
    }
  }
  return out;
}

}  // namespace funnelsim
