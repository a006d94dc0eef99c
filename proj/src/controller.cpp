#include "funnelsim/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace funnelsim {

void ControllerConfig::validate() const {
  if (relative_degree == 0) {
    throw std::invalid_argument("relative degree must be at least 1");
  }
  funnels.validate(relative_degree);
}

ControllerOutput controller_eval(const ControllerConfig& cfg, double t, const Jet& e0) {
  const std::size_t r = cfg.relative_degree;
  if (e0.order() + 1 < r) {
    throw std::invalid_argument("error jet must carry derivatives up to order r - 1");
  }
  ControllerOutput out;
  out.errors.reserve(r);
  out.gains.reserve(r);
  out.error_norms.reserve(r);

  Jet e = e0.truncated(r - 1);
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t order = r - 1 - i;
    const Jet k = gain(phi_jet(cfg.funnels[i], t, order), e, cfg.gain_guard, i);

    const auto value = e.values();
    out.errors.emplace_back(value.begin(), value.end());
    out.gains.push_back(k[0]);
    out.error_norms.push_back(std::sqrt(jet_sqnorm(e.truncated(0))[0]));

    if (i + 1 < r) {
      e = jet_add(jet_derivative(e), jet_scale(k, e));
    }
  }

  const auto& last = out.errors.back();
  out.u.resize(last.size());
  for (std::size_t c = 0; c < last.size(); ++c) {
    out.u[c] = -out.gains.back() * last[c];
  }
  return out;
}

}  // namespace funnelsim
