#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace funnelsim {

inline constexpr double kDefaultGammaTolerance = 1e-9;

// x' = A x + b u, y = <x, c>
struct LinearTriple {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

// Byrnes-Isidori form of a finite-dimensional triple:
//
//   y^(r) = sum_i P_i y^(i) + S eta + gamma u
//   eta'  = Q eta + R y
//
// with coordinates (y, y', ..., y^(r-1), eta) = (C x, N x), where
// C = [c^T; c^T A; ...; c^T A^{r-1}] and the columns of V span ker C.
// The inverse map is x = B (C B)^{-1} xi + V eta with B = [b, A b, ..., A^{r-1} b].
struct ByrnesIsidoriForm {
  std::size_t relative_degree = 0;
  double gamma = 0.0;
  Eigen::RowVectorXd P;  // 1 x r
  Eigen::MatrixXd Q;     // (n - r) x (n - r)
  Eigen::VectorXd R;     // n - r
  Eigen::RowVectorXd S;  // 1 x (n - r)
  Eigen::MatrixXd to_chain;     // C, r x n
  Eigen::MatrixXd to_internal;  // N, (n - r) x n
  Eigen::MatrixXd from_chain;     // B (C B)^{-1}, n x r
  Eigen::MatrixXd from_internal;  // V, n x (n - r)

  std::size_t internal_dim() const noexcept { return static_cast<std::size_t>(Q.rows()); }
};

/// Relative degree and high-frequency gain; NoRelativeDegree when every
/// c^T A^j b (j < n) is below tol in magnitude.
ByrnesIsidoriForm bi_transform(const LinearTriple& sys, double tol_gamma = kDefaultGammaTolerance);

/// Output of the original triple under input u, sampled every `dt` on [0, horizon], RK4.
Eigen::VectorXd simulate_triple(const LinearTriple& sys, const Eigen::VectorXd& x0,
                                const std::function<double(double)>& u, double horizon, double dt);

/// Same, integrating the Byrnes-Isidori chain from the transformed initial state.
Eigen::VectorXd simulate_bi_form(const ByrnesIsidoriForm& form, const Eigen::VectorXd& x0,
                                 const std::function<double(double)>& u, double horizon, double dt);

}  // namespace funnelsim
