#include "funnelsim/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "funnelsim/errors.hpp"

namespace funnelsim {

Eigen::VectorXd Disturbance::at(double t) const {
  const Eigen::Map<const Eigen::VectorXd> amp(amplitude.data(), static_cast<Eigen::Index>(amplitude.size()));
  switch (kind) {
    case Kind::zero: return Eigen::VectorXd::Zero(amp.size());
    case Kind::sinusoid: return amp * std::sin(omega * t);
    case Kind::step: return t >= switch_time ? Eigen::VectorXd(amp) : Eigen::VectorXd::Zero(amp.size());
  }
  return Eigen::VectorXd::Zero(amp.size());
}

double symmetric_part_min_eigenvalue(const Eigen::MatrixXd& gamma) {
  const Eigen::MatrixXd sym = gamma + gamma.transpose();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

void Plant::validate() const {
  if (relative_degree == 0 || output_dim == 0) {
    throw std::invalid_argument("plant needs r >= 1 and m >= 1");
  }
  if (!internal) {
    throw std::invalid_argument("plant has no internal operator");
  }
  if (internal->input_dim() != state_dim()) {
    throw std::invalid_argument("internal operator reads " + std::to_string(internal->input_dim()) +
                                " channels but the output chain has " + std::to_string(state_dim()));
  }
  if (initial_state.size() != state_dim()) {
    throw std::invalid_argument("initial state must hold y(0), ..., y^(r-1)(0) (" + std::to_string(state_dim()) +
                                " values)");
  }
  if (!(memory >= 0.0)) {
    throw std::invalid_argument("memory h must be >= 0");
  }
  const auto m = static_cast<Eigen::Index>(output_dim);
  const auto p = static_cast<Eigen::Index>(disturbance.dim());
  const auto q = static_cast<Eigen::Index>(internal->output_dim());
  if (const auto* f = std::get_if<AffineDrift>(&drift)) {
    if (f->F0.size() != m || f->D.rows() != m || f->D.cols() != p || f->W.rows() != m || f->W.cols() != q) {
      throw std::invalid_argument("affine drift shapes must be F0: m, D: m x p, W: m x q");
    }
  }
  if (const auto* g = std::get_if<Eigen::MatrixXd>(&gain)) {
    if (g->rows() != m || g->cols() != m) {
      throw std::invalid_argument("high-frequency gain must be m x m");
    }
    if (!(symmetric_part_min_eigenvalue(*g) > 0.0)) {
      throw GainDegenerate("Gamma + Gamma^T is not positive definite");
    }
  }
}

Eigen::VectorXd rhs(const Plant& plant, double t, std::span<const double> w, std::span<const double> u) {
  const Eigen::VectorXd d = plant.disturbance.at(t);
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));

  Eigen::VectorXd f;
  if (const auto* affine = std::get_if<AffineDrift>(&plant.drift)) {
    f = affine->F0 + affine->D * d + affine->W * wv;
  } else {
    f = std::get<DriftCallback>(plant.drift)(d, wv);
  }
  if (const auto* g = std::get_if<Eigen::MatrixXd>(&plant.gain)) {
    return f + *g * uv;
  }
  const Eigen::MatrixXd g = std::get<GainCallback>(plant.gain)(d, wv);
  if (!(symmetric_part_min_eigenvalue(g) > 0.0)) {
    throw GainDegenerate("Gamma(d, w) + Gamma(d, w)^T is not positive definite at t = " + std::to_string(t));
  }
  return f + g * uv;
}

}  // namespace funnelsim
