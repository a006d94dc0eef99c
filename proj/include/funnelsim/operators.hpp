#pragma once

// Causal operators realizing the internal dynamics w = T(zeta).
//
// Every operator consumes input samples in strictly increasing time order.
// Samples at t < 0 are history (the memory interval [-h, 0]); the internal
// state starts evolving at the first sample with t >= 0. After push(t, zeta)
// the operator reports its output at t.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "funnelsim/kernels.hpp"
#include "funnelsim/measure.hpp"

namespace funnelsim {

class InternalOperator {
public:
  virtual ~InternalOperator() = default;

  virtual std::string_view kind() const noexcept = 0;
  virtual std::size_t input_dim() const noexcept = 0;
  virtual std::size_t output_dim() const noexcept = 0;
  /// Length h of the input prefix [-h, 0] the operator reads.
  virtual double memory() const noexcept { return 0.0; }
  /// True when T(a z1 + b z2) = a T(z1) + b T(z2) for zero initial state.
  virtual bool is_linear() const noexcept { return true; }

  virtual void reset() = 0;
  virtual void push(double t, std::span<const double> zeta) = 0;
  virtual std::span<const double> output() const = 0;
  /// Internal state vector (empty for memoryless realizations).
  virtual std::span<const double> state() const { return {}; }
  virtual std::unique_ptr<InternalOperator> clone() const = 0;
};

// Vector-valued samples with piecewise-linear interpolation.
class SampleHistory {
public:
  explicit SampleHistory(std::size_t dim = 1) : dim_(dim) {}

  void clear();
  void append(double t, std::span<const double> value);
  bool empty() const noexcept { return times_.empty(); }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  double first_time() const { return times_.front(); }
  double last_time() const { return times_.back(); }
  std::span<const double> times() const noexcept { return times_; }

  /// Component `comp` interpolated at t; HistoryGap outside the sampled range.
  double at(double t, std::size_t comp = 0) const;
  void at(double t, std::span<double> out) const;

private:
  std::size_t locate(double t) const;

  std::size_t dim_;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Scalar zero output; the trivial member of the class.
class ZeroOperator final : public InternalOperator {
public:
  explicit ZeroOperator(std::size_t input_dim = 1, std::size_t output_dim = 1);

  std::string_view kind() const noexcept override { return "zero"; }
  std::size_t input_dim() const noexcept override { return input_dim_; }
  std::size_t output_dim() const noexcept override { return out_.size(); }
  void reset() override {}
  void push(double, std::span<const double> zeta) override;
  std::span<const double> output() const override { return out_; }
  std::unique_ptr<InternalOperator> clone() const override;

private:
  std::size_t input_dim_;
  std::vector<double> out_;
};

struct ConvolutionOptions {
  std::size_t channel = 0;
  std::size_t panels_per_unit = kDefaultPanelsPerUnit;
  kernels::Execution execution = kernels::Execution::automatic;
};

// w(t) = int_0^t y(t - s) dh(s) with y = zeta[channel], evaluated on the
// piecewise-linear interpolant of the full sample history.
class ConvolutionOperator final : public InternalOperator {
public:
  ConvolutionOperator(Measure measure, std::size_t input_dim = 1, ConvolutionOptions options = {});

  std::string_view kind() const noexcept override { return "convolution"; }
  std::size_t input_dim() const noexcept override { return input_dim_; }
  std::size_t output_dim() const noexcept override { return 1; }
  void reset() override;
  void push(double t, std::span<const double> zeta) override;
  std::span<const double> output() const override { return std::span<const double>(&output_, 1); }
  std::unique_ptr<InternalOperator> clone() const override;

  /// Convolution at any t covered by the history; HistoryGap otherwise.
  double convolve(double t) const;
  const Measure& measure() const noexcept { return measure_; }
  const SampleHistory& history() const noexcept { return history_; }

private:
  Measure measure_;
  std::size_t input_dim_;
  ConvolutionOptions options_;
  SampleHistory history_;
  double output_ = 0.0;
  mutable std::vector<double> scratch_;
};

struct TransportOptions {
  double speed = 1.0;
  /// Domain truncation b; the grid covers [0, N dxi] with N dxi >= b.
  double truncation = 10.0;
  /// Grid cells; 0 picks N so that speed * dt / dxi == 1 exactly.
  std::size_t cells = 0;
  /// Base time step the grid is built for (CFL is checked against it).
  double dt = 0.01;
  std::size_t channel = 0;
  kernels::Execution execution = kernels::Execution::automatic;
};

// z_t = c z_xi + h(xi) y on [0, b], z(t, b) = 0, output z(t, 0).
//
// Explicit first-order upwind in xi. Density loads are cell averages over
// [xi_i, xi_{i+1}] (finite even for the 1/sqrt(xi) singularity); an atom at
// t_k deposits a_k / dxi into the cell whose outflow reaches xi = 0 after
// t_k / c. Between two samples the input is held at the older one.
class TransportPDE final : public InternalOperator {
public:
  TransportPDE(const Measure& measure, std::size_t input_dim = 1, TransportOptions options = {});

  std::string_view kind() const noexcept override { return "transport"; }
  std::size_t input_dim() const noexcept override { return input_dim_; }
  std::size_t output_dim() const noexcept override { return 1; }
  void reset() override;
  void push(double t, std::span<const double> zeta) override;
  std::span<const double> output() const override { return std::span<const double>(&z_.front(), 1); }
  std::span<const double> state() const override { return z_; }
  std::unique_ptr<InternalOperator> clone() const override;

  /// One upwind step of size dt with source value y; CflViolation if c dt > dxi.
  void step(double y, double dt);

  std::size_t cells() const noexcept { return z_.size(); }
  double spacing() const noexcept { return dxi_; }
  double speed() const noexcept { return options_.speed; }
  double domain_end() const noexcept { return dxi_ * static_cast<double>(z_.size()); }
  /// Measure mass beyond the truncated domain.
  double truncation_tail_mass() const noexcept { return tail_mass_; }
  std::span<const double> load() const noexcept { return load_; }

private:
  TransportOptions options_;
  std::size_t input_dim_;
  double dxi_ = 0.0;
  double tail_mass_ = 0.0;
  std::vector<double> load_;
  std::vector<double> z_;
  std::vector<double> scratch_;
  bool started_ = false;
  double t_prev_ = 0.0;
  double y_prev_ = 0.0;
};

// eta' = Q eta + R zeta, eta(0) = eta0, output S eta. Each push advances by
// one classical RK4 step with the input interpolated linearly between the
// previous and the new sample.
class LTIInternal final : public InternalOperator {
public:
  LTIInternal(Eigen::MatrixXd Q, Eigen::MatrixXd R, Eigen::MatrixXd S, Eigen::VectorXd eta0);

  std::string_view kind() const noexcept override { return "lti"; }
  std::size_t input_dim() const noexcept override { return static_cast<std::size_t>(R_.cols()); }
  std::size_t output_dim() const noexcept override { return static_cast<std::size_t>(S_.rows()); }
  bool is_linear() const noexcept override { return eta0_.isZero(0.0); }
  void reset() override;
  void push(double t, std::span<const double> zeta) override;
  std::span<const double> output() const override { return out_; }
  std::span<const double> state() const override { return {eta_.data(), static_cast<std::size_t>(eta_.size())}; }
  std::unique_ptr<InternalOperator> clone() const override;

  /// Advance eta over dt with input samples at the start and end of the step.
  void step(std::span<const double> zeta_start, std::span<const double> zeta_end, double dt);

  const Eigen::MatrixXd& Q() const noexcept { return Q_; }
  const Eigen::MatrixXd& R() const noexcept { return R_; }
  const Eigen::MatrixXd& S() const noexcept { return S_; }

private:
  void refresh_output();

  Eigen::MatrixXd Q_, R_, S_;
  Eigen::VectorXd eta0_, eta_;
  Eigen::VectorXd zeta_prev_;
  std::vector<double> out_;
  bool started_ = false;
  double t_prev_ = 0.0;
};

// Pass-through branch z1 = T~(zeta).
struct Passthrough {
  enum class Kind { identity, delay, tanh };
  Kind kind = Kind::identity;
  double delay = 0.0;
};

// z2 = S(x) on the inner state, either s.x or tanh(s.x) (none: empty z2).
struct StateMap {
  enum class Kind { none, linear, tanh_linear };
  Kind kind = Kind::none;
  std::vector<double> weights;
};

// Observation w = F(z1, z2, z3) with z3 = C x the inner output.
struct ObservationMap {
  enum class Kind { linear, general };
  Kind kind = Kind::linear;
  // linear: w = offset + f1.z1 + f2.z2 + f3.z3 (scalar output)
  std::vector<double> f1, f2, f3;
  double offset = 0.0;
  // general: continuously differentiable user map
  std::function<std::vector<double>(std::span<const double>, std::span<const double>, std::span<const double>)> map;
  std::size_t output_dim = 1;
};

// T(zeta)(t) = F(T~(zeta)(t), S(x)(t), (C x)(t)) with x driven by zeta.
class ComposedOperator final : public InternalOperator {
public:
  ComposedOperator(Passthrough passthrough, std::unique_ptr<InternalOperator> inner, StateMap state_map,
                   ObservationMap observation);
  ComposedOperator(const ComposedOperator& other);

  std::string_view kind() const noexcept override { return "composed"; }
  std::size_t input_dim() const noexcept override { return inner_->input_dim(); }
  std::size_t output_dim() const noexcept override { return out_.size(); }
  double memory() const noexcept override;
  bool is_linear() const noexcept override;
  void reset() override;
  void push(double t, std::span<const double> zeta) override;
  std::span<const double> output() const override { return out_; }
  std::span<const double> state() const override { return inner_->state(); }
  std::unique_ptr<InternalOperator> clone() const override;

  const InternalOperator& inner() const noexcept { return *inner_; }

private:
  Passthrough passthrough_;
  std::unique_ptr<InternalOperator> inner_;
  StateMap state_map_;
  ObservationMap observation_;
  SampleHistory history_;
  std::vector<double> z1_, z2_;
  std::vector<double> out_;
};

}  // namespace funnelsim
