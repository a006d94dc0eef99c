#pragma once

#include <cstddef>
#include <vector>

#include "funnelsim/funnel.hpp"
#include "funnelsim/jet.hpp"

namespace funnelsim {

struct ControllerConfig {
  std::size_t relative_degree = 1;
  FunnelStack funnels;
  double gain_guard = kDefaultGainGuard;

  /// Throws std::invalid_argument when the funnel stack does not fit r.
  void validate() const;
};

struct ControllerOutput {
  std::vector<double> u;
  /// errors[i] is e_i(t), one vector of size m per stage.
  std::vector<std::vector<double>> errors;
  std::vector<double> gains;
  std::vector<double> error_norms;
};

/// Funnel feedback u = -k_{r-1} e_{r-1} with e_{i+1} = e_i' + k_i e_i.
///
/// `e0` carries e = y - y_ref and its derivatives up to order r - 1. Each
/// stage consumes one derivative order, so e_i is resolved exactly from the
/// error jet and the funnel derivatives. Throws FunnelViolation(i) if stage i
/// leaves its funnel (denominator below the configured guard).
ControllerOutput controller_eval(const ControllerConfig& cfg, double t, const Jet& e0);

}  // namespace funnelsim
