#include "funnelsim/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace funnelsim {

namespace {

// Row n of Pascal's triangle; orders stay tiny so this is never hot.
std::vector<double> binomial_row(std::size_t n) {
  std::vector<double> row(n + 1, 1.0);
  for (std::size_t k = 1; k < n; ++k) {
    row[k] = row[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  return row;
}

void require_same_dim(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("jet dimension mismatch");
  }
}

}  // namespace

Jet::Jet(std::size_t order, std::size_t dim) : order_(order), dim_(dim), data_((order + 1) * dim, 0.0) {
  if (dim == 0) {
    throw std::invalid_argument("jet dimension must be at least 1");
  }
}

Jet Jet::scalar(std::initializer_list<double> coeffs) {
  return scalar(std::span<const double>(coeffs.begin(), coeffs.size()));
}

Jet Jet::scalar(std::span<const double> coeffs) {
  if (coeffs.empty()) {
    throw std::invalid_argument("jet needs at least a value");
  }
  Jet j(coeffs.size() - 1, 1);
  std::copy(coeffs.begin(), coeffs.end(), j.data_.begin());
  return j;
}

Jet Jet::vector(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) {
    throw std::invalid_argument("jet needs at least a value");
  }
  const std::size_t dim = rows.begin()->size();
  Jet j(rows.size() - 1, dim);
  std::size_t k = 0;
  for (const auto& row : rows) {
    if (row.size() != dim) {
      throw std::invalid_argument("jet rows must share one dimension");
    }
    std::copy(row.begin(), row.end(), j.data_.begin() + static_cast<std::ptrdiff_t>(k * dim));
    ++k;
  }
  return j;
}

Jet Jet::constant(std::size_t order, std::span<const double> value) {
  Jet j(order, value.size());
  std::copy(value.begin(), value.end(), j.data_.begin());
  return j;
}

std::span<const double> Jet::coeff(std::size_t j) const {
  return std::span<const double>(data_).subspan(j * dim_, dim_);
}

std::span<double> Jet::coeff(std::size_t j) {
  return std::span<double>(data_).subspan(j * dim_, dim_);
}

Jet Jet::truncated(std::size_t order) const {
  const std::size_t k = std::min(order, order_);
  Jet out(k, dim_);
  std::copy_n(data_.begin(), (k + 1) * dim_, out.data_.begin());
  return out;
}

Jet jet_add(const Jet& a, const Jet& b) {
  require_same_dim(a, b);
  const std::size_t k = std::min(a.order(), b.order());
  Jet out(k, a.dim());
  for (std::size_t j = 0; j <= k; ++j) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      out(j, c) = a(j, c) + b(j, c);
    }
  }
  return out;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  require_same_dim(a, b);
  const std::size_t k = std::min(a.order(), b.order());
  Jet out(k, a.dim());
  for (std::size_t j = 0; j <= k; ++j) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      out(j, c) = a(j, c) - b(j, c);
    }
  }
  return out;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  if (!a.is_scalar() || !b.is_scalar()) {
    throw std::invalid_argument("jet_mul expects scalar jets");
  }
  return jet_scale(a, b);
}

Jet jet_scale(const Jet& s, const Jet& v) {
  if (!s.is_scalar()) {
    throw std::invalid_argument("jet_scale expects a scalar multiplier");
  }
  const std::size_t k = std::min(s.order(), v.order());
  Jet out(k, v.dim());
  for (std::size_t j = 0; j <= k; ++j) {
    const auto binom = binomial_row(j);
    for (std::size_t i = 0; i <= j; ++i) {
      const double w = binom[i] * s[i];
      for (std::size_t c = 0; c < v.dim(); ++c) {
        out(j, c) += w * v(j - i, c);
      }
    }
  }
  return out;
}

Jet jet_scale(double s, const Jet& v) {
  Jet out = v;
  for (std::size_t j = 0; j <= v.order(); ++j) {
    for (auto& x : out.coeff(j)) {
      x *= s;
    }
  }
  return out;
}

Jet jet_reciprocal(const Jet& a) {
  if (!a.is_scalar()) {
    throw std::invalid_argument("jet_reciprocal expects a scalar jet");
  }
  if (a[0] == 0.0) {
    throw std::domain_error("jet_reciprocal: zero value");
  }
  // Differentiating a * r = 1 j times and solving for r_j.
  const std::size_t k = a.order();
  Jet r(k, 1);
  const double inv = 1.0 / a[0];
  r[0] = inv;
  for (std::size_t j = 1; j <= k; ++j) {
    const auto binom = binomial_row(j);
    double acc = 0.0;
    for (std::size_t i = 1; i <= j; ++i) {
      acc += binom[i] * a[i] * r[j - i];
    }
    r[j] = -inv * acc;
  }
  return r;
}

Jet jet_sqnorm(const Jet& a) {
  const std::size_t k = a.order();
  Jet out(k, 1);
  for (std::size_t j = 0; j <= k; ++j) {
    const auto binom = binomial_row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i <= j; ++i) {
      double dot = 0.0;
      for (std::size_t c = 0; c < a.dim(); ++c) {
        dot += a(i, c) * a(j - i, c);
      }
      acc += binom[i] * dot;
    }
    out[j] = acc;
  }
  return out;
}

Jet jet_derivative(const Jet& a) {
  if (a.order() == 0) {
    throw std::invalid_argument("jet_derivative needs order >= 1");
  }
  Jet out(a.order() - 1, a.dim());
  for (std::size_t j = 0; j < a.order(); ++j) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      out(j, c) = a(j + 1, c);
    }
  }
  return out;
}

}  // namespace funnelsim
