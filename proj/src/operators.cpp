#include "funnelsim/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "funnelsim/errors.hpp"

namespace funnelsim {

namespace {

double time_tolerance(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

std::size_t even_panels(double length, std::size_t per_unit) {
  auto n = static_cast<std::size_t>(std::ceil(length * static_cast<double>(per_unit)));
  n = std::max<std::size_t>(n, 2);
  return n + (n % 2);
}

void require_dim(std::span<const double> zeta, std::size_t dim) {
  if (zeta.size() != dim) {
    throw std::invalid_argument("operator input has dimension " + std::to_string(zeta.size()) + ", expected " +
                                std::to_string(dim));
  }
}

double dot(const std::vector<double>& w, std::span<const double> x) {
  if (w.empty()) {
    return 0.0;
  }
  if (w.size() != x.size()) {
    throw std::invalid_argument("observation weights do not match signal dimension");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * x[i];
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------

void SampleHistory::clear() {
  times_.clear();
  values_.clear();
}

void SampleHistory::append(double t, std::span<const double> value) {
  require_dim(value, dim_);
  if (!times_.empty() && !(t > times_.back())) {
    throw std::invalid_argument("samples must arrive in strictly increasing time order");
  }
  times_.push_back(t);
  values_.insert(values_.end(), value.begin(), value.end());
}

std::size_t SampleHistory::locate(double t) const {
  if (times_.empty()) {
    throw HistoryGap("no samples recorded");
  }
  const double tol = time_tolerance(t);
  if (t < times_.front() - tol || t > times_.back() + tol) {
    throw HistoryGap("time " + std::to_string(t) + " outside sampled range [" + std::to_string(times_.front()) +
                     ", " + std::to_string(times_.back()) + "]");
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin());
}

double SampleHistory::at(double t, std::size_t comp) const {
  const std::size_t k = locate(t);
  if (k == 0) {
    return values_[comp];
  }
  if (k == times_.size()) {
    return values_[(k - 1) * dim_ + comp];
  }
  const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  return (1.0 - w) * values_[(k - 1) * dim_ + comp] + w * values_[k * dim_ + comp];
}

void SampleHistory::at(double t, std::span<double> out) const {
  for (std::size_t c = 0; c < dim_; ++c) {
    out[c] = at(t, c);
  }
}

// ---------------------------------------------------------------------------

ZeroOperator::ZeroOperator(std::size_t input_dim, std::size_t output_dim)
    : input_dim_(input_dim), out_(output_dim, 0.0) {}

void ZeroOperator::push(double, std::span<const double> zeta) { require_dim(zeta, input_dim_); }

std::unique_ptr<InternalOperator> ZeroOperator::clone() const { return std::make_unique<ZeroOperator>(*this); }

// ---------------------------------------------------------------------------

ConvolutionOperator::ConvolutionOperator(Measure measure, std::size_t input_dim, ConvolutionOptions options)
    : measure_(std::move(measure)), input_dim_(input_dim), options_(options) {
  if (options_.channel >= input_dim_) {
    throw std::invalid_argument("convolution channel out of range");
  }
  if (options_.panels_per_unit == 0) {
    throw std::invalid_argument("panels_per_unit must be positive");
  }
}

void ConvolutionOperator::reset() {
  history_.clear();
  output_ = 0.0;
}

void ConvolutionOperator::push(double t, std::span<const double> zeta) {
  require_dim(zeta, input_dim_);
  const double y = zeta[options_.channel];
  history_.append(t, std::span<const double>(&y, 1));
  output_ = t >= 0.0 ? convolve(t) : 0.0;
}

double ConvolutionOperator::convolve(double t) const {
  if (history_.empty() || t > history_.last_time() + time_tolerance(t)) {
    throw HistoryGap("convolution queried at t = " + std::to_string(t) + " beyond the recorded input");
  }
  const double tol = time_tolerance(t);
  double acc = 0.0;
  for (const auto& atom : measure_.atoms()) {
    if (atom.location > t + tol) {
      break;
    }
    acc += atom.weight * history_.at(std::max(t - atom.location, 0.0));
  }

  const auto& density = measure_.density();
  if (!density) {
    return acc;
  }
  const double lo = density->start();
  const double hi = std::min(t, density->end());
  if (!(hi > lo)) {
    return acc;
  }
  if (history_.first_time() > t - hi + tol) {
    throw HistoryGap("convolution needs input history back to t = " + std::to_string(t - hi));
  }

  // The integrand reads the history through a clamped lookup so no exception
  // can escape a parallel region; coverage was checked above.
  const double first = history_.first_time();
  const double last = history_.last_time();
  auto y_at = [&](double s) { return history_.at(std::clamp(s, first, last)); };

  if (density->singular()) {
    const double a = std::sqrt(lo);
    const double b = std::sqrt(hi);
    const std::size_t n = even_panels(b - a, options_.panels_per_unit);
    const double h = (b - a) / static_cast<double>(n);
    scratch_.resize(n + 1);
    kernels::sample(options_.execution, std::span<double>(scratch_), a, h, [&](double sigma) {
      const double s = sigma * sigma;
      return 2.0 * density->smooth_part(s) * y_at(t - s);
    });
    return acc + kernels::simpson_sum(scratch_, h);
  }
  const std::size_t n = even_panels(hi - lo, options_.panels_per_unit);
  const double h = (hi - lo) / static_cast<double>(n);
  scratch_.resize(n + 1);
  kernels::sample(options_.execution, std::span<double>(scratch_), lo, h,
                  [&](double s) { return density->smooth_part(s) * y_at(t - s); });
  return acc + kernels::simpson_sum(scratch_, h);
}

std::unique_ptr<InternalOperator> ConvolutionOperator::clone() const {
  return std::make_unique<ConvolutionOperator>(*this);
}

// ---------------------------------------------------------------------------

TransportPDE::TransportPDE(const Measure& measure, std::size_t input_dim, TransportOptions options)
    : options_(options), input_dim_(input_dim) {
  if (!(options_.speed > 0.0) || !(options_.truncation > 0.0) || !(options_.dt > 0.0)) {
    throw std::invalid_argument("transport needs speed, truncation and dt > 0");
  }
  if (options_.channel >= input_dim_) {
    throw std::invalid_argument("transport channel out of range");
  }
  std::size_t n = options_.cells;
  if (n == 0) {
    dxi_ = options_.speed * options_.dt;
    n = static_cast<std::size_t>(std::ceil(options_.truncation / dxi_ - 1e-9));
  } else {
    dxi_ = options_.truncation / static_cast<double>(n);
    const double courant = options_.speed * options_.dt / dxi_;
    if (courant > 1.0 + 1e-12) {
      throw CflViolation("transport grid violates CFL: c dt / dxi = " + std::to_string(courant) + " > 1");
    }
  }
  n = std::max<std::size_t>(n, 1);

  load_.assign(n, 0.0);
  if (const auto& density = measure.density()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = dxi_ * static_cast<double>(i);
      load_[i] = density->integral(a, a + dxi_) / dxi_;
    }
  }
  const double end = dxi_ * static_cast<double>(n);
  for (const auto& atom : measure.atoms()) {
    if (atom.location > end) {
      continue;
    }
    // Cell i reaches xi = 0 after (i + 1) dxi / c.
    const double cell = std::round(atom.location / dxi_) - 1.0;
    const auto i = static_cast<std::size_t>(std::clamp(cell, 0.0, static_cast<double>(n - 1)));
    load_[i] += atom.weight / dxi_;
  }
  tail_mass_ = measure.tail_mass(end);
  z_.assign(n, 0.0);
  scratch_.assign(n, 0.0);
}

void TransportPDE::reset() {
  std::fill(z_.begin(), z_.end(), 0.0);
  started_ = false;
  t_prev_ = 0.0;
  y_prev_ = 0.0;
}

void TransportPDE::step(double y, double dt) {
  const double courant = options_.speed * dt / dxi_;
  if (courant > 1.0 + 1e-12) {
    throw CflViolation("transport step violates CFL: c dt / dxi = " + std::to_string(courant) + " > 1");
  }
  if (kernels::use_parallel(options_.execution, z_.size())) {
    kernels::upwind_step_parallel(z_, scratch_, load_, courant, dt * y);
  } else {
    kernels::upwind_step_serial(z_, load_, courant, dt * y);
  }
}

void TransportPDE::push(double t, std::span<const double> zeta) {
  require_dim(zeta, input_dim_);
  if (t < 0.0) {
    return;
  }
  const double y = zeta[options_.channel];
  if (started_) {
    if (!(t > t_prev_)) {
      throw std::invalid_argument("samples must arrive in strictly increasing time order");
    }
    const double span = t - t_prev_;
    const auto substeps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(options_.speed * span / dxi_ - 1e-9)));
    const double dt = span / static_cast<double>(substeps);
    for (std::size_t k = 0; k < substeps; ++k) {
      step(y_prev_, dt);
    }
  }
  started_ = true;
  t_prev_ = t;
  y_prev_ = y;
}

std::unique_ptr<InternalOperator> TransportPDE::clone() const { return std::make_unique<TransportPDE>(*this); }

// ---------------------------------------------------------------------------

LTIInternal::LTIInternal(Eigen::MatrixXd Q, Eigen::MatrixXd R, Eigen::MatrixXd S, Eigen::VectorXd eta0)
    : Q_(std::move(Q)), R_(std::move(R)), S_(std::move(S)), eta0_(std::move(eta0)) {
  const auto n = Q_.rows();
  if (Q_.cols() != n || R_.rows() != n || S_.cols() != n || eta0_.size() != n) {
    throw std::invalid_argument("LTI internal dynamics: inconsistent matrix shapes");
  }
  if (R_.cols() == 0 || S_.rows() == 0) {
    throw std::invalid_argument("LTI internal dynamics needs at least one input and one output");
  }
  reset();
}

void LTIInternal::reset() {
  eta_ = eta0_;
  zeta_prev_ = Eigen::VectorXd::Zero(R_.cols());
  started_ = false;
  t_prev_ = 0.0;
  refresh_output();
}

void LTIInternal::refresh_output() {
  const Eigen::VectorXd w = S_ * eta_;
  out_.assign(w.data(), w.data() + w.size());
}

void LTIInternal::step(std::span<const double> zeta_start, std::span<const double> zeta_end, double dt) {
  require_dim(zeta_start, input_dim());
  require_dim(zeta_end, input_dim());
  const Eigen::Map<const Eigen::VectorXd> za(zeta_start.data(), static_cast<Eigen::Index>(zeta_start.size()));
  const Eigen::Map<const Eigen::VectorXd> zb(zeta_end.data(), static_cast<Eigen::Index>(zeta_end.size()));
  const Eigen::VectorXd ra = R_ * za;
  const Eigen::VectorXd rb = R_ * zb;
  const Eigen::VectorXd rm = 0.5 * (ra + rb);

  const Eigen::VectorXd k1 = Q_ * eta_ + ra;
  const Eigen::VectorXd k2 = Q_ * (eta_ + 0.5 * dt * k1) + rm;
  const Eigen::VectorXd k3 = Q_ * (eta_ + 0.5 * dt * k2) + rm;
  const Eigen::VectorXd k4 = Q_ * (eta_ + dt * k3) + rb;
  eta_ += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  refresh_output();
}

void LTIInternal::push(double t, std::span<const double> zeta) {
  require_dim(zeta, input_dim());
  if (t < 0.0) {
    return;
  }
  if (started_) {
    if (!(t > t_prev_)) {
      throw std::invalid_argument("samples must arrive in strictly increasing time order");
    }
    step(std::span<const double>(zeta_prev_.data(), static_cast<std::size_t>(zeta_prev_.size())), zeta,
         t - t_prev_);
  }
  started_ = true;
  t_prev_ = t;
  zeta_prev_ = Eigen::Map<const Eigen::VectorXd>(zeta.data(), static_cast<Eigen::Index>(zeta.size()));
}

std::unique_ptr<InternalOperator> LTIInternal::clone() const { return std::make_unique<LTIInternal>(*this); }

// ---------------------------------------------------------------------------

ComposedOperator::ComposedOperator(Passthrough passthrough, std::unique_ptr<InternalOperator> inner,
                                   StateMap state_map, ObservationMap observation)
    : passthrough_(passthrough),
      inner_(std::move(inner)),
      state_map_(std::move(state_map)),
      observation_(std::move(observation)) {
  if (!inner_) {
    throw std::invalid_argument("composed operator needs inner dynamics");
  }
  if (passthrough_.kind == Passthrough::Kind::delay && !(passthrough_.delay >= 0.0)) {
    throw std::invalid_argument("pass-through delay must be >= 0");
  }
  if (state_map_.kind != StateMap::Kind::none && state_map_.weights.size() != inner_->state().size()) {
    throw std::invalid_argument("state map weights do not match the inner state dimension");
  }
  if (observation_.kind == ObservationMap::Kind::general && !observation_.map) {
    throw std::invalid_argument("general observation map needs a callback");
  }
  history_ = SampleHistory(inner_->input_dim());
  z1_.assign(inner_->input_dim(), 0.0);
  z2_.assign(state_map_.kind == StateMap::Kind::none ? 0 : 1, 0.0);
  out_.assign(observation_.kind == ObservationMap::Kind::linear ? 1 : observation_.output_dim, 0.0);
}

ComposedOperator::ComposedOperator(const ComposedOperator& other)
    : passthrough_(other.passthrough_),
      inner_(other.inner_->clone()),
      state_map_(other.state_map_),
      observation_(other.observation_),
      history_(other.history_),
      z1_(other.z1_),
      z2_(other.z2_),
      out_(other.out_) {}

double ComposedOperator::memory() const noexcept {
  const double own = passthrough_.kind == Passthrough::Kind::delay ? passthrough_.delay : 0.0;
  return std::max(own, inner_->memory());
}

bool ComposedOperator::is_linear() const noexcept {
  return passthrough_.kind != Passthrough::Kind::tanh && state_map_.kind != StateMap::Kind::tanh_linear &&
         observation_.kind == ObservationMap::Kind::linear && observation_.offset == 0.0 && inner_->is_linear();
}

void ComposedOperator::reset() {
  inner_->reset();
  history_.clear();
  std::fill(z1_.begin(), z1_.end(), 0.0);
  std::fill(z2_.begin(), z2_.end(), 0.0);
  std::fill(out_.begin(), out_.end(), 0.0);
}

void ComposedOperator::push(double t, std::span<const double> zeta) {
  require_dim(zeta, input_dim());
  if (passthrough_.kind == Passthrough::Kind::delay) {
    history_.append(t, zeta);
  }
  inner_->push(t, zeta);
  if (t < 0.0) {
    return;
  }

  switch (passthrough_.kind) {
    case Passthrough::Kind::identity:
      std::copy(zeta.begin(), zeta.end(), z1_.begin());
      break;
    case Passthrough::Kind::delay:
      history_.at(t - passthrough_.delay, z1_);
      break;
    case Passthrough::Kind::tanh:
      std::transform(zeta.begin(), zeta.end(), z1_.begin(), [](double v) { return std::tanh(v); });
      break;
  }

  if (state_map_.kind != StateMap::Kind::none) {
    const double s = dot(state_map_.weights, inner_->state());
    z2_[0] = state_map_.kind == StateMap::Kind::linear ? s : std::tanh(s);
  }
  const auto z3 = inner_->output();

  if (observation_.kind == ObservationMap::Kind::linear) {
    out_[0] = observation_.offset + dot(observation_.f1, z1_) + dot(observation_.f2, z2_) + dot(observation_.f3, z3);
  } else {
    auto w = observation_.map(z1_, z2_, z3);
    if (w.size() != out_.size()) {
      throw std::invalid_argument("observation map returned the wrong dimension");
    }
    out_ = std::move(w);
  }
}

std::unique_ptr<InternalOperator> ComposedOperator::clone() const {
  return std::make_unique<ComposedOperator>(*this);
}

}  // namespace funnelsim
