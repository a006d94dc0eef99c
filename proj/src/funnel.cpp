#include "funnelsim/funnel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "funnelsim/errors.hpp"

namespace funnelsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

FunnelFunction FunnelFunction::exp_shift(double a, double b, double c) {
  if (!(a >= 0.0) || !(b > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("expshift funnel needs a >= 0, b > 0, c > 0");
  }
  return FunnelFunction(ExpShift{a, b, c});
}

FunnelFunction FunnelFunction::constant(double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("constant funnel needs lambda > 0");
  }
  return FunnelFunction(ConstantFunnel{lambda});
}

FunnelFunction FunnelFunction::general(std::vector<std::function<double(double)>> derivatives) {
  if (derivatives.empty()) {
    throw std::invalid_argument("general funnel needs at least phi itself");
  }
  return FunnelFunction(GeneralFunnel{std::move(derivatives)});
}

double FunnelFunction::value(double t) const { return phi_jet(*this, t, 0)[0]; }

double FunnelFunction::radius(double t) const {
  const double v = value(t);
  return v > 0.0 ? 1.0 / v : std::numeric_limits<double>::infinity();
}

std::optional<std::size_t> FunnelFunction::max_order() const {
  if (const auto* g = std::get_if<GeneralFunnel>(&family_)) {
    return g->derivatives.size() - 1;
  }
  return std::nullopt;
}

std::optional<double> FunnelFunction::radius_lower_bound() const {
  return std::visit(overloaded{
                        [](const ExpShift& f) -> std::optional<double> { return f.c; },
                        [](const ConstantFunnel& f) -> std::optional<double> { return f.lambda; },
                        [](const GeneralFunnel&) -> std::optional<double> { return std::nullopt; },
                    },
                    family_);
}

std::string FunnelFunction::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const ExpShift& f) { os << "expshift:" << f.a << ',' << f.b << ',' << f.c; },
                 [&](const ConstantFunnel& f) { os << "const:" << f.lambda; },
                 [&](const GeneralFunnel& f) { os << "general(order " << f.derivatives.size() - 1 << ')'; },
             },
             family_);
  return os.str();
}

Jet phi_jet(const FunnelFunction& phi, double t, std::size_t k) {
  return std::visit(
      overloaded{
          [&](const ExpShift& f) {
            // g = a e^{-bt} + c has g^(j) = a (-b)^j e^{-bt}; phi = 1/g.
            Jet g(k, 1);
            const double decay = f.a * std::exp(-f.b * t);
            g[0] = decay + f.c;
            double term = decay;
            for (std::size_t j = 1; j <= k; ++j) {
              term *= -f.b;
              g[j] = term;
            }
            return jet_reciprocal(g);
          },
          [&](const ConstantFunnel& f) {
            Jet out(k, 1);
            out[0] = 1.0 / f.lambda;
            return out;
          },
          [&](const GeneralFunnel& f) {
            if (k >= f.derivatives.size()) {
              throw std::invalid_argument("general funnel: derivative order " + std::to_string(k) +
                                          " not provided");
            }
            Jet out(k, 1);
            for (std::size_t j = 0; j <= k; ++j) {
              out[j] = f.derivatives[j](t);
            }
            return out;
          },
      },
      phi.family());
}

double funnel_margin(const FunnelFunction& phi, double t, std::span<const double> e) {
  double sq = 0.0;
  for (double x : e) {
    sq += x * x;
  }
  return 1.0 - phi.value(t) * std::sqrt(sq);
}

Jet gain(const Jet& phi, const Jet& e, double guard, std::size_t stage) {
  const Jet phi2 = jet_mul(phi, phi);
  const Jet e2 = jet_sqnorm(e);
  const std::size_t k = std::min(phi.order(), e.order());
  Jet one(k, 1);
  one[0] = 1.0;
  const Jet denom = jet_sub(one, jet_mul(phi2, e2));
  if (!(denom[0] >= guard)) {
    throw FunnelViolation(stage, denom[0]);
  }
  return jet_reciprocal(denom);
}

void FunnelStack::validate(std::size_t r) const {
  if (functions.size() != r) {
    throw std::invalid_argument("funnel stack length " + std::to_string(functions.size()) +
                                " does not match relative degree " + std::to_string(r));
  }
  for (std::size_t i = 0; i < r; ++i) {
    const auto order = functions[i].max_order();
    if (order && *order < r - i) {
      throw std::invalid_argument("funnel " + std::to_string(i) + " must provide derivatives up to order " +
                                  std::to_string(r - i));
    }
  }
}

}  // namespace funnelsim
