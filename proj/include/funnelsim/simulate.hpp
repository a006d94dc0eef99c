#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "funnelsim/controller.hpp"
#include "funnelsim/plant.hpp"
#include "funnelsim/reference.hpp"

namespace funnelsim {

enum class Integrator { euler, rk4 };

struct Scenario {
  Plant plant;
  ControllerConfig controller;
  ReferenceSignal reference;
  double horizon = 10.0;
  double dt = 0.01;
  Integrator integrator = Integrator::rk4;
  /// Keep every n-th accepted step in the trace (the final step is always kept).
  std::size_t decimation = 1;
  std::size_t max_halvings = 20;

  /// Dimension and relative-degree consistency checks.
  void validate() const;
};

struct TraceRecord {
  double t = 0.0;
  std::vector<double> y;
  std::vector<double> y_ref;
  std::vector<double> u;
  std::vector<double> w;
  std::vector<double> error_norms;  // |e_i(t)|
  std::vector<double> gains;        // k_i(t)
  std::vector<double> radii;        // 1 / phi_i(t)
};

struct RunReport {
  bool completed = false;
  std::string failure;  // empty, or why the run stopped early
  double horizon = 0.0;
  double final_time = 0.0;
  std::size_t steps = 0;
  std::size_t rejections = 0;
  double sup_u = 0.0;
  std::vector<double> sup_gain;          // per stage
  std::vector<double> sup_derivative;    // sup |y^(j)|, j = 0..r-1
  std::vector<double> min_margin;        // min_t (1/phi_i - |e_i|)
  std::vector<double> max_funnel_ratio;  // max_t phi_i |e_i|
  double wall_seconds = 0.0;
};

struct SimulationResult {
  std::vector<TraceRecord> trace;
  RunReport report;
};

/// Fixed-step closed loop. The internal operator is sampled once per accepted
/// step and held during it. A step whose stages leave a funnel is retried
/// with half the step, up to `max_halvings` times; past that the run stops
/// with report.completed == false ("step collapse").
/// Throws InadmissibleInitialCondition if the initial errors are not inside
/// their funnels.
SimulationResult simulate(const Scenario& scenario);

struct VerifyOptions {
  double u_cap = 1e3;
  double gain_cap = 1e3;
};

struct VerificationVerdict {
  bool horizon_reached = false;
  bool bounded = false;
  bool inside_funnels = false;
  double final_time = 0.0;
  double max_u = 0.0;
  double max_gain = 0.0;
  std::vector<double> epsilon;  // min_t (1/phi_i - |e_i|) over the trace
  std::size_t worst_row = 0;

  bool passed() const noexcept { return horizon_reached && bounded && inside_funnels; }
};

/// One flag per clause of VerificationVerdict; the funnel clause is checked
/// row by row over the whole trace.
VerificationVerdict verify_run(const std::vector<TraceRecord>& trace, const RunReport& report,
                               const VerifyOptions& options = {});

}  // namespace funnelsim
