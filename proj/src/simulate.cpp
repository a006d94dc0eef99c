#include "funnelsim/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "funnelsim/errors.hpp"

namespace funnelsim {

namespace {

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Raised inside a step when the state blows up numerically; handled like a
// funnel violation (the step is rejected and retried shorter).
struct NonFiniteState {};

class ClosedLoop {
public:
  explicit ClosedLoop(const Scenario& sc) : sc_(sc), r_(sc.plant.relative_degree), m_(sc.plant.output_dim) {}

  std::size_t state_dim() const { return r_ * m_; }

  ControllerOutput control(double t, std::span<const double> x) const {
    const Jet ref = reference_jet(sc_.reference, t, r_ - 1);
    Jet e(r_ - 1, m_);
    for (std::size_t j = 0; j < r_; ++j) {
      for (std::size_t c = 0; c < m_; ++c) {
        e(j, c) = x[j * m_ + c] - ref(j, c);
      }
    }
    return controller_eval(sc_.controller, t, e);
  }

  // d/dt (y, ..., y^(r-1)) with the operator output held at w.
  std::vector<double> derivative(double t, std::span<const double> x, std::span<const double> w) const {
    if (!all_finite(x)) {
      throw NonFiniteState{};
    }
    const auto ctrl = control(t, x);
    const Eigen::VectorXd top = rhs(sc_.plant, t, w, ctrl.u);
    std::vector<double> dx(state_dim());
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(m_), x.end(), dx.begin());
    for (std::size_t c = 0; c < m_; ++c) {
      dx[(r_ - 1) * m_ + c] = top[static_cast<Eigen::Index>(c)];
    }
    return dx;
  }

  std::vector<double> step(double t, const std::vector<double>& x, std::span<const double> w, double h) const {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    if (sc_.integrator == Integrator::euler) {
      const auto k1 = derivative(t, x, w);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + h * k1[i];
      }
      return out;
    }
    std::vector<double> tmp(n);
    const auto k1 = derivative(t, x, w);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    const auto k2 = derivative(t + 0.5 * h, tmp, w);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    const auto k3 = derivative(t + 0.5 * h, tmp, w);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    const auto k4 = derivative(t + h, tmp, w);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
  }

private:
  const Scenario& sc_;
  std::size_t r_;
  std::size_t m_;
};

TraceRecord make_record(const Scenario& sc, double t, std::span<const double> x, const ControllerOutput& ctrl,
                        std::span<const double> w) {
  const std::size_t m = sc.plant.output_dim;
  TraceRecord rec;
  rec.t = t;
  rec.y.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m));
  const Jet ref = reference_jet(sc.reference, t, 0);
  const auto ref0 = ref.values();
  rec.y_ref.assign(ref0.begin(), ref0.end());
  rec.u = ctrl.u;
  rec.w.assign(w.begin(), w.end());
  rec.error_norms = ctrl.error_norms;
  rec.gains = ctrl.gains;
  for (std::size_t i = 0; i < sc.controller.relative_degree; ++i) {
    rec.radii.push_back(sc.controller.funnels[i].radius(t));
  }
  return rec;
}

void accumulate(RunReport& report, const Scenario& sc, double t, std::span<const double> x,
                const ControllerOutput& ctrl) {
  const std::size_t r = sc.controller.relative_degree;
  const std::size_t m = sc.plant.output_dim;
  report.sup_u = std::max(report.sup_u, norm(ctrl.u));
  for (std::size_t i = 0; i < r; ++i) {
    report.sup_gain[i] = std::max(report.sup_gain[i], ctrl.gains[i]);
    report.sup_derivative[i] = std::max(report.sup_derivative[i], norm(x.subspan(i * m, m)));
    const double phi = sc.controller.funnels[i].value(t);
    const double radius = sc.controller.funnels[i].radius(t);
    report.min_margin[i] = std::min(report.min_margin[i], radius - ctrl.error_norms[i]);
    report.max_funnel_ratio[i] = std::max(report.max_funnel_ratio[i], phi * ctrl.error_norms[i]);
  }
}

}  // namespace

void Scenario::validate() const {
  plant.validate();
  controller.validate();
  if (plant.relative_degree != controller.relative_degree) {
    throw std::invalid_argument("plant and controller disagree on the relative degree");
  }
  if (reference.dim() != plant.output_dim) {
    throw std::invalid_argument("reference dimension does not match the plant output");
  }
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("horizon and dt must be positive");
  }
  if (decimation == 0) {
    throw std::invalid_argument("decimation must be >= 1");
  }
}

SimulationResult simulate(const Scenario& sc) {
  sc.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t r = sc.controller.relative_degree;
  const ClosedLoop loop(sc);

  SimulationResult result;
  RunReport& report = result.report;
  report.horizon = sc.horizon;
  report.sup_gain.assign(r, 0.0);
  report.sup_derivative.assign(r, 0.0);
  report.min_margin.assign(r, kInf);
  report.max_funnel_ratio.assign(r, 0.0);

  auto op = sc.plant.internal->clone();
  op->reset();

  // History on [-h, 0) on the k dt grid, then the initial sample at t = 0.
  const double memory = std::max(sc.plant.memory, op->memory());
  if (memory > 0.0) {
    const auto first = static_cast<long long>(std::ceil(memory / sc.dt - 1e-9));
    std::vector<double> sample(loop.state_dim());
    for (long long k = -first; k < 0; ++k) {
      const double t = static_cast<double>(k) * sc.dt;
      if (sc.plant.history) {
        sc.plant.history(t, sample);
      } else {
        std::copy(sc.plant.initial_state.begin(), sc.plant.initial_state.end(), sample.begin());
      }
      op->push(t, sample);
    }
  }

  std::vector<double> x = sc.plant.initial_state;
  double t = 0.0;
  ControllerOutput ctrl;
  try {
    ctrl = loop.control(t, x);
  } catch (const FunnelViolation& v) {
    throw InadmissibleInitialCondition("initial error is not inside funnel " + std::to_string(v.stage()) +
                                       " (phi_i(0) |e_i(0)| must be < 1)");
  }
  op->push(t, x);
  std::vector<double> w(op->output().begin(), op->output().end());
  accumulate(report, sc, t, x, ctrl);
  result.trace.push_back(make_record(sc, t, x, ctrl, w));

  // Macro steps end on t_n = n dt (the last one on the horizon). A rejected
  // step is retried at half the size and the rest of the macro step is then
  // covered by sub-steps of that size, so trace rows never leave the grid.
  const double end_tol = 1e-9 * sc.dt;
  const auto macro_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(sc.horizon / sc.dt - 1e-9)));
  std::size_t accepted = 0;
  ControllerOutput ctrl_next;
  for (std::size_t n = 1; n <= macro_steps && report.failure.empty(); ++n) {
    const double target = n == macro_steps ? sc.horizon : static_cast<double>(n) * sc.dt;
    std::size_t depth = 0;
    while (target - t > end_tol) {
      const double h = std::min(sc.dt * std::ldexp(1.0, -static_cast<int>(depth)), target - t);
      const bool closes = target - t - h <= end_tol;
      try {
        auto x_next = loop.step(t, x, w, h);
        if (!all_finite(x_next)) {
          throw NonFiniteState{};
        }
        const double t_next = closes ? target : t + h;
        ctrl_next = loop.control(t_next, x_next);
        t = t_next;
        x = std::move(x_next);
        op->push(t, x);
        w.assign(op->output().begin(), op->output().end());
        ++accepted;
        accumulate(report, sc, t, x, ctrl_next);
        continue;
      } catch (const FunnelViolation&) {
      } catch (const NonFiniteState&) {
      }
      ++report.rejections;
      if (++depth > sc.max_halvings) {
        report.failure = "step collapse at t = " + std::to_string(t) + " after " + std::to_string(sc.max_halvings) +
                         " halvings";
        break;
      }
    }
    if (report.failure.empty() && (n % sc.decimation == 0 || n == macro_steps)) {
      result.trace.push_back(make_record(sc, t, x, ctrl_next, w));
    }
  }

  report.steps = accepted;
  report.final_time = t;
  report.completed = report.failure.empty() && !(t < sc.horizon - end_tol);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

VerificationVerdict verify_run(const std::vector<TraceRecord>& trace, const RunReport& report,
                               const VerifyOptions& options) {
  VerificationVerdict v;
  if (trace.empty()) {
    return v;
  }
  v.final_time = trace.back().t;
  v.horizon_reached = report.completed && v.final_time >= report.horizon - 1e-9 * std::max(1.0, report.horizon);

  const std::size_t r = trace.front().radii.size();
  v.epsilon.assign(r, kInf);
  bool finite = true;
  double worst = kInf;
  for (std::size_t row = 0; row < trace.size(); ++row) {
    const auto& rec = trace[row];
    const double u = norm(rec.u);
    finite = finite && std::isfinite(u);
    v.max_u = std::max(v.max_u, u);
    for (std::size_t i = 0; i < r; ++i) {
      finite = finite && std::isfinite(rec.gains[i]);
      v.max_gain = std::max(v.max_gain, rec.gains[i]);
      const double margin = rec.radii[i] - rec.error_norms[i];
      v.epsilon[i] = std::min(v.epsilon[i], margin);
      if (margin < worst) {
        worst = margin;
        v.worst_row = row;
      }
    }
  }
  v.bounded = finite && v.max_u <= options.u_cap && v.max_gain <= options.gain_cap;
  v.inside_funnels = std::all_of(v.epsilon.begin(), v.epsilon.end(), [](double e) { return e > 0.0; });
  return v;
}

}  // namespace funnelsim
