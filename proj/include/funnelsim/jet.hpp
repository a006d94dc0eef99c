#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace funnelsim {

// A time signal truncated to its first `order` derivatives.
//
// Coefficient j holds the j-th time derivative (not the Taylor coefficient),
// so products follow the Leibniz rule with binomial weights. Vector-valued
// jets store `dim` components per coefficient, contiguous.
class Jet {
public:
  Jet(std::size_t order, std::size_t dim);

  /// Scalar jet from (value, d/dt, d2/dt2, ...).
  static Jet scalar(std::initializer_list<double> coeffs);
  static Jet scalar(std::span<const double> coeffs);
  /// Vector jet from coefficient rows; all rows must share one dimension.
  static Jet vector(std::initializer_list<std::initializer_list<double>> rows);
  static Jet constant(std::size_t order, std::span<const double> value);

  std::size_t order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_scalar() const noexcept { return dim_ == 1; }

  std::span<const double> coeff(std::size_t j) const;
  std::span<double> coeff(std::size_t j);

  double operator()(std::size_t j, std::size_t comp) const { return data_[j * dim_ + comp]; }
  double& operator()(std::size_t j, std::size_t comp) { return data_[j * dim_ + comp]; }
  /// Scalar access; valid for dim() == 1.
  double operator[](std::size_t j) const { return data_[j]; }
  double& operator[](std::size_t j) { return data_[j]; }

  double value() const { return data_[0]; }
  std::span<const double> values() const { return coeff(0); }

  Jet truncated(std::size_t order) const;

private:
  std::size_t order_;
  std::size_t dim_;
  std::vector<double> data_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
/// Leibniz product of two scalar jets.
Jet jet_mul(const Jet& a, const Jet& b);
/// Leibniz product of a scalar jet with a vector jet.
Jet jet_scale(const Jet& s, const Jet& v);
Jet jet_scale(double s, const Jet& v);
/// Jet of 1/a; throws std::domain_error when a(0) == 0.
Jet jet_reciprocal(const Jet& a);
/// Scalar jet of <a(t), a(t)>.
Jet jet_sqnorm(const Jet& a);
/// Drops the value and shifts every derivative down by one order.
Jet jet_derivative(const Jet& a);

inline Jet operator+(const Jet& a, const Jet& b) { return jet_add(a, b); }
inline Jet operator-(const Jet& a, const Jet& b) { return jet_sub(a, b); }

}  // namespace funnelsim
