#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "funnelsim/operators.hpp"

namespace funnelsim {

// Bounded disturbance d(t) in R^p.
struct Disturbance {
  enum class Kind { zero, sinusoid, step };
  Kind kind = Kind::zero;
  std::vector<double> amplitude{0.0};  // size p
  double omega = 1.0;
  double switch_time = 0.0;

  std::size_t dim() const noexcept { return amplitude.size(); }
  Eigen::VectorXd at(double t) const;
};

// f(d, w) = F0 + D d + W w
struct AffineDrift {
  Eigen::VectorXd F0;
  Eigen::MatrixXd D;
  Eigen::MatrixXd W;
};

using DriftCallback = std::function<Eigen::VectorXd(const Eigen::VectorXd& d, const Eigen::VectorXd& w)>;
using GainCallback = std::function<Eigen::MatrixXd(const Eigen::VectorXd& d, const Eigen::VectorXd& w)>;

// y^(r) = f(d, T(y, ..., y^(r-1))) + Gamma(d, T(...)) u
struct Plant {
  std::size_t relative_degree = 1;
  std::size_t output_dim = 1;
  std::variant<AffineDrift, DriftCallback> drift;
  std::variant<Eigen::MatrixXd, GainCallback> gain;
  Disturbance disturbance;
  /// Prototype of the internal operator; each simulation runs its own clone.
  std::shared_ptr<const InternalOperator> internal;
  /// Memory h; the history callback supplies (y, ..., y^(r-1)) on [-h, 0].
  double memory = 0.0;
  std::function<void(double, std::span<double>)> history;
  /// (y(0), y'(0), ..., y^(r-1)(0)), stacked, size r m.
  std::vector<double> initial_state;

  std::size_t state_dim() const noexcept { return relative_degree * output_dim; }
  /// Shape and sign checks; throws std::invalid_argument or GainDegenerate.
  void validate() const;
};

/// y^(r) = f(d(t), w) + Gamma(d(t), w) u, with w the operator output at t.
/// Callback gains are checked for Gamma + Gamma^T > 0 on every call.
Eigen::VectorXd rhs(const Plant& plant, double t, std::span<const double> w, std::span<const double> u);

/// Smallest eigenvalue of Gamma + Gamma^T.
double symmetric_part_min_eigenvalue(const Eigen::MatrixXd& gamma);

}  // namespace funnelsim
