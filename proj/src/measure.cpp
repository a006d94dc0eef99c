#include "funnelsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "funnelsim/kernels.hpp"

namespace funnelsim {

namespace {

// Integration cutoff for closed-form densities with unbounded support.
constexpr double kUnboundedCutoff = 200.0;

std::size_t even_panels(double length, std::size_t per_unit) {
  auto n = static_cast<std::size_t>(std::ceil(length * static_cast<double>(per_unit)));
  n = std::max<std::size_t>(n, 2);
  return n + (n % 2);
}

double simpson(double a, double b, std::size_t per_unit, const std::function<double(double)>& f) {
  if (!(b > a)) {
    return 0.0;
  }
  const std::size_t n = even_panels(b - a, per_unit);
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> samples(n + 1);
  kernels::sample_serial(std::span<double>(samples), a, h, f);
  return kernels::simpson_sum(samples, h);
}

}  // namespace

Density Density::exp_sqrt() {
  Density d;
  d.smooth_ = [](double s) { return std::exp(-s); };
  d.singular_ = true;
  d.name_ = "expsqrt";
  d.analytic_mass_ = std::sqrt(std::numbers::pi);
  d.analytic_tail_ = [](double x) { return std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(std::max(x, 0.0))); };
  return d;
}

Density Density::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("exponential density needs rate > 0");
  }
  Density d;
  d.smooth_ = [rate](double s) { return std::exp(-rate * s); };
  d.name_ = "exp";
  d.analytic_mass_ = 1.0 / rate;
  d.analytic_tail_ = [rate](double x) { return std::exp(-rate * std::max(x, 0.0)) / rate; };
  return d;
}

Density Density::closed_form(std::function<double(double)> smooth, bool singular, double end, std::string name) {
  if (!(end > 0.0)) {
    throw std::invalid_argument("density support must have positive length");
  }
  Density d;
  d.smooth_ = std::move(smooth);
  d.singular_ = singular;
  d.end_ = end;
  d.name_ = std::move(name);
  return d;
}

Density Density::grid(std::vector<double> xi, std::vector<double> g) {
  if (xi.size() != g.size() || xi.size() < 2) {
    throw std::invalid_argument("grid density needs at least two (xi, g) nodes");
  }
  if (xi.front() < 0.0) {
    throw std::invalid_argument("grid density nodes must be >= 0");
  }
  for (std::size_t i = 1; i < xi.size(); ++i) {
    if (!(xi[i] > xi[i - 1])) {
      throw std::invalid_argument("grid density nodes must be strictly increasing");
    }
  }
  Density d;
  d.start_ = xi.front();
  d.end_ = xi.back();
  d.name_ = "grid";
  d.nodes_ = xi;
  d.smooth_ = [xi = std::move(xi), g = std::move(g)](double s) {
    if (s < xi.front() || s > xi.back()) {
      return 0.0;
    }
    const auto it = std::upper_bound(xi.begin(), xi.end(), s);
    if (it == xi.end()) {
      return g.back();
    }
    const auto k = static_cast<std::size_t>(it - xi.begin());
    const double w = (s - xi[k - 1]) / (xi[k] - xi[k - 1]);
    return (1.0 - w) * g[k - 1] + w * g[k];
  };
  return d;
}

Density Density::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open density file " + path.string());
  }
  std::vector<double> xi;
  std::vector<double> g;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream row(line);
    double x = 0.0;
    double v = 0.0;
    if (!(row >> x >> v)) {
      throw std::runtime_error("malformed density row: " + line);
    }
    xi.push_back(x);
    g.push_back(v);
  }
  return grid(std::move(xi), std::move(g));
}

double Density::operator()(double s) const {
  if (s < start_ || s > end_) {
    return 0.0;
  }
  if (singular_) {
    return s > 0.0 ? smooth_(s) / std::sqrt(s) : kInf;
  }
  return smooth_(s);
}

double Density::integral(double a, double b, std::size_t panels_per_unit) const {
  return integrate(a, b, panels_per_unit, false);
}

double Density::abs_integral(double a, double b, std::size_t panels_per_unit) const {
  return integrate(a, b, panels_per_unit, true);
}

double Density::integrate(double a, double b, std::size_t panels_per_unit, bool absolute) const {
  a = std::max(a, start_);
  b = std::min(b, end_);
  if (!(b > a)) {
    return 0.0;
  }
  if (std::isinf(b)) {
    if (analytic_mass_ && a == 0.0) {
      return *analytic_mass_;
    }
    b = a + kUnboundedCutoff;
  }

  if (!nodes_.empty()) {
    // Exact for the piecewise-linear interpolant, segment by segment.
    double acc = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      const double lo = std::max(a, nodes_[i - 1]);
      const double hi = std::min(b, nodes_[i]);
      if (!(hi > lo)) {
        continue;
      }
      const double glo = smooth_(lo);
      const double ghi = smooth_(hi);
      if (absolute && glo * ghi < 0.0) {
        const double root = lo + (hi - lo) * glo / (glo - ghi);
        acc += 0.5 * (std::abs(glo) * (root - lo) + std::abs(ghi) * (hi - root));
      } else {
        const double seg = 0.5 * (glo + ghi) * (hi - lo);
        acc += absolute ? std::abs(seg) : seg;
      }
    }
    return acc;
  }

  if (singular_) {
    // s = sigma^2 turns g(s) ds into 2 smooth(sigma^2) dsigma.
    return simpson(std::sqrt(a), std::sqrt(b), panels_per_unit, [&](double sigma) {
      const double v = 2.0 * smooth_(sigma * sigma);
      return absolute ? std::abs(v) : v;
    });
  }
  return simpson(a, b, panels_per_unit, [&](double s) {
    const double v = smooth_(s);
    return absolute ? std::abs(v) : v;
  });
}

double Density::tail(double from) const {
  if (analytic_tail_) {
    return analytic_tail_(from);
  }
  return abs_integral(from, kInf);
}

Measure::Measure(std::vector<Atom> atoms, std::optional<Density> density)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.location < y.location; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].location >= 0.0) || !std::isfinite(atoms_[i].location) || !std::isfinite(atoms_[i].weight)) {
      throw std::invalid_argument("atoms need finite locations >= 0 and finite weights");
    }
    if (i > 0 && atoms_[i].location == atoms_[i - 1].location) {
      throw std::invalid_argument("atom locations must be distinct");
    }
  }
  const double tv = total_variation();
  if (!std::isfinite(tv)) {
    throw std::invalid_argument("measure has unbounded total variation");
  }
}

Measure Measure::dirac(double location, double weight) { return Measure({Atom{location, weight}}, std::nullopt); }

double Measure::total_variation(double truncation) const {
  double tv = 0.0;
  for (const auto& a : atoms_) {
    if (a.location <= truncation) {
      tv += std::abs(a.weight);
    }
  }
  if (density_) {
    tv += density_->abs_integral(0.0, truncation);
  }
  return tv;
}

double Measure::tail_mass(double from) const {
  double tail = 0.0;
  for (const auto& a : atoms_) {
    if (a.location > from) {
      tail += std::abs(a.weight);
    }
  }
  if (density_) {
    tail += density_->tail(from);
  }
  return tail;
}

std::vector<Atom> parse_atoms(const std::string& text) {
  std::vector<Atom> atoms;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("atom '" + item + "' must read location:weight");
    }
    try {
      atoms.push_back(Atom{std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("atom '" + item + "' is not numeric");
    }
  }
  return atoms;
}

}  // namespace funnelsim
