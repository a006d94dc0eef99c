#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numerical code paths; each oracle
// recomputes its quantity from first principles.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Fourth-order central differences in long double with step h = eps^(1/(k+2)).
inline long double fd_step(int order) {
  return std::pow(std::numeric_limits<long double>::epsilon(), 1.0L / static_cast<long double>(order + 2));
}

inline long double central_difference(const std::function<long double(long double)>& f, long double t, int order) {
  const long double h = fd_step(order);
  auto at = [&](int k) { return f(t + k * h); };
  switch (order) {
    case 0: return f(t);
    case 1: return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
    case 2: return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h);
    case 3: return (-at(3) + 8 * at(2) - 13 * at(1) + 13 * at(-1) - 8 * at(-2) + at(-3)) / (8 * h * h * h);
    default: return std::numeric_limits<long double>::quiet_NaN();
  }
}

// |approx - exact| / max(|exact|, 1)
inline double relative_error(double approx, long double exact) {
  return static_cast<double>(std::abs(static_cast<long double>(approx) - exact) /
                             std::max<long double>(std::abs(exact), 1.0L));
}

// p(t) = sum_i c_i t^i
struct Polynomial {
  std::vector<double> c;

  long double operator()(long double t) const {
    long double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * t + static_cast<long double>(*it);
    }
    return acc;
  }

  // j-th derivative at t, exact (falling factorials).
  double derivative(int j, double t) const {
    long double acc = 0;
    for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(j);) {
      long double fall = 1;
      for (int m = 0; m < j; ++m) {
        fall *= static_cast<long double>(i - static_cast<std::size_t>(m));
      }
      acc = acc * t + fall * static_cast<long double>(c[i]);
    }
    return static_cast<double>(acc);
  }
};

inline Polynomial random_polynomial(std::mt19937_64& rng, double scale = 1.0, double offset = 0.0) {
  std::uniform_int_distribution<int> degree(0, 5);
  std::uniform_real_distribution<double> coeff(-scale, scale);
  Polynomial p;
  p.c.resize(static_cast<std::size_t>(degree(rng)) + 1);
  for (auto& x : p.c) {
    x = coeff(rng);
  }
  p.c[0] += offset;
  return p;
}

// Closed loop y' = y + u with u = -e / (1 - phi^2 e^2), phi = 1/(a e^{-bt} + c),
// e = y - cos t, integrated by RK4 with `substeps` steps per dt.
inline std::vector<double> dirac_closed_loop(double a, double b, double c, double dt, double horizon,
                                             int substeps) {
  auto f = [&](double t, double y) {
    const double phi = 1.0 / (a * std::exp(-b * t) + c);
    const double e = y - std::cos(t);
    return y - e / (1.0 - phi * phi * e * e);
  };
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  const double h = dt / substeps;
  std::vector<double> y(n + 1, 0.0);
  double state = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (int s = 0; s < substeps; ++s) {
      const double t = static_cast<double>(k) * dt + s * h;
      const double k1 = f(t, state);
      const double k2 = f(t + h / 2, state + h / 2 * k1);
      const double k3 = f(t + h / 2, state + h / 2 * k2);
      const double k4 = f(t + h, state + h * k3);
      state += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    y[k + 1] = state;
  }
  return y;
}

// sqrt(pi) erf(sqrt(t)) = int_0^t e^{-s} / sqrt(s) ds
inline double expsqrt_mass(double t) { return std::sqrt(std::acos(-1.0)) * std::erf(std::sqrt(t)); }

// Stable n x n matrix: random S shifted by its spectral norm plus a margin.
inline Eigen::MatrixXd random_stable(std::mt19937_64& rng, Eigen::Index n, double margin = 0.5) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd S(n, n);
  for (Eigen::Index i = 0; i < S.size(); ++i) {
    S.data()[i] = normal(rng) / std::sqrt(static_cast<double>(n));
  }
  const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues()(0);
  return S - (norm + margin) * Eigen::MatrixXd::Identity(n, n);
}

struct Triple {
  Eigen::MatrixXd A;
  Eigen::VectorXd b, c;
};

// Random stable triple with relative degree r in {1, 2} by construction:
// c is projected so that c.A^j b = 0 for j < r - 1 and |c.A^{r-1} b| >= 0.2.
inline Triple random_triple(std::mt19937_64& rng, Eigen::Index n, int r) {
  std::normal_distribution<double> normal;
  for (;;) {
    Triple t;
    t.A = random_stable(rng, n);
    t.b = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
    t.c = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
    if (r == 2) {
      t.c -= t.c.dot(t.b) / t.b.squaredNorm() * t.b;
    }
    const Eigen::VectorXd lead = r == 1 ? t.b : Eigen::VectorXd(t.A * t.b);
    if (std::abs(t.c.dot(lead)) >= 0.2) {
      return t;
    }
  }
}

// y(t) of x' = A x + b u, y = c.x via the matrix exponential of the augmented
// system for the input u(t) = sin(omega t) (exact up to expm accuracy).
inline double triple_output_sine(const Triple& sys, const Eigen::VectorXd& x0, double omega, double t) {
  const Eigen::Index n = sys.A.rows();
  // Augment with the harmonic oscillator (s, c)' = (omega c, -omega s); u = s.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 2, n + 2);
  M.topLeftCorner(n, n) = sys.A;
  M.block(0, n, n, 1) = sys.b;
  M(n, n + 1) = omega;
  M(n + 1, n) = -omega;
  Eigen::VectorXd z(n + 2);
  z.head(n) = x0;
  z[n] = 0.0;      // sin(0)
  z[n + 1] = 1.0;  // cos(0)
  // Scaling and squaring with a 20-term Taylor series.
  Eigen::MatrixXd X = M * t;
  int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(std::max(1.0, X.lpNorm<Eigen::Infinity>())))) + 4);
  X /= std::ldexp(1.0, squarings);
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n + 2, n + 2);
  Eigen::MatrixXd term = E;
  for (int k = 1; k <= 20; ++k) {
    term = term * X / k;
    E += term;
  }
  for (int k = 0; k < squarings; ++k) {
    E = E * E;
  }
  return sys.c.dot((E * z).head(n));
}

}  // namespace oracle
