#include "funnelsim/linear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "funnelsim/errors.hpp"

namespace funnelsim {

namespace {

template <class Rhs>
Eigen::VectorXd rk4_outputs(Eigen::VectorXd x, const Rhs& rhs, const std::function<double(const Eigen::VectorXd&)>& out,
                            double horizon, double dt) {
  const auto steps = static_cast<Eigen::Index>(std::llround(horizon / dt));
  Eigen::VectorXd y(steps + 1);
  y[0] = out(x);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Eigen::VectorXd k1 = rhs(t, x);
    const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rhs(t + dt, x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y[k + 1] = out(x);
  }
  return y;
}

}  // namespace

ByrnesIsidoriForm bi_transform(const LinearTriple& sys, double tol_gamma) {
  const Eigen::Index n = sys.A.rows();
  if (n == 0 || sys.A.cols() != n || sys.b.size() != n || sys.c.size() != n) {
    throw std::invalid_argument("bi_transform: A must be n x n with b, c in R^n");
  }

  // Markov-type parameters c^T A^j b decide the relative degree.
  Eigen::MatrixXd powers_b(n, n + 1);
  powers_b.col(0) = sys.b;
  for (Eigen::Index j = 1; j <= n; ++j) {
    powers_b.col(j) = sys.A * powers_b.col(j - 1);
  }
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(sys.c.dot(powers_b.col(j))) > tol_gamma) {
      r = j + 1;
      break;
    }
  }
  if (r == 0) {
    throw NoRelativeDegree("c^T A^j b vanishes (below " + std::to_string(tol_gamma) + ") for all j < n");
  }

  ByrnesIsidoriForm form;
  form.relative_degree = static_cast<std::size_t>(r);
  form.gamma = sys.c.dot(powers_b.col(r - 1));

  Eigen::MatrixXd C(r, n);
  Eigen::RowVectorXd row = sys.c.transpose();
  for (Eigen::Index i = 0; i < r; ++i) {
    C.row(i) = row;
    row = row * sys.A;
  }
  const Eigen::RowVectorXd cAr = row;  // c^T A^r
  const Eigen::MatrixXd B = powers_b.leftCols(r);

  // Orthonormal basis of ker C from a full QR of C^T.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(C.transpose());
  const Eigen::MatrixXd full_q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd V = full_q.rightCols(n - r);
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index k = 0;
    V.col(j).cwiseAbs().maxCoeff(&k);
    if (V(k, j) < 0.0) {
      V.col(j) *= -1.0;
    }
  }

  const Eigen::MatrixXd CB = C * B;
  const Eigen::MatrixXd from_chain = B * CB.fullPivLu().inverse();
  const Eigen::MatrixXd N = V.transpose() * (Eigen::MatrixXd::Identity(n, n) - from_chain * C);

  form.to_chain = C;
  form.to_internal = N;
  form.from_chain = from_chain;
  form.from_internal = V;
  form.P = cAr * from_chain;
  form.S = cAr * V;
  form.Q = N * sys.A * V;
  // N A B (CB)^{-1} only has a first column: the internal state sees y alone.
  form.R = (N * sys.A * from_chain).col(0);
  return form;
}

Eigen::VectorXd simulate_triple(const LinearTriple& sys, const Eigen::VectorXd& x0,
                                const std::function<double(double)>& u, double horizon, double dt) {
  auto rhs = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd { return sys.A * x + sys.b * u(t); };
  return rk4_outputs(x0, rhs, [&](const Eigen::VectorXd& x) { return sys.c.dot(x); }, horizon, dt);
}

Eigen::VectorXd simulate_bi_form(const ByrnesIsidoriForm& form, const Eigen::VectorXd& x0,
                                 const std::function<double(double)>& u, double horizon, double dt) {
  const auto r = static_cast<Eigen::Index>(form.relative_degree);
  const auto q = static_cast<Eigen::Index>(form.internal_dim());
  Eigen::VectorXd z(r + q);
  z.head(r) = form.to_chain * x0;
  z.tail(q) = form.to_internal * x0;
  auto rhs = [&](double t, const Eigen::VectorXd& s) -> Eigen::VectorXd {
    Eigen::VectorXd ds(r + q);
    ds.head(r - 1) = s.segment(1, r - 1);
    ds[r - 1] = form.P.dot(s.head(r)) + form.gamma * u(t) + (q > 0 ? form.S.dot(s.tail(q)) : 0.0);
    if (q > 0) {
      ds.tail(q) = form.Q * s.tail(q) + form.R * s[0];
    }
    return ds;
  };
  return rk4_outputs(z, rhs, [](const Eigen::VectorXd& s) { return s[0]; }, horizon, dt);
}

}  // namespace funnelsim
