#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace funnelsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default quadrature resolution: Simpson panels per unit of the integration
/// variable (s, or sigma = sqrt(s) for singular densities).
inline constexpr std::size_t kDefaultPanelsPerUnit = 64;

// Density g on [start, end) w.r.t. Lebesgue measure. A singular density is
// stored through its smooth factor: g(s) = smooth(s) / sqrt(s).
class Density {
public:
  /// g(s) = exp(-s) / sqrt(s); total mass sqrt(pi).
  static Density exp_sqrt();
  /// g(s) = exp(-rate s); total mass 1/rate.
  static Density exponential(double rate);
  static Density closed_form(std::function<double(double)> smooth, bool singular, double end = kInf,
                             std::string name = "closed-form");
  /// Piecewise-linear interpolant of (xi, g) nodes; zero outside [xi.front(), xi.back()].
  static Density grid(std::vector<double> xi, std::vector<double> g);
  /// Two-column text file "xi g" with strictly increasing xi.
  static Density from_file(const std::filesystem::path& path);

  double operator()(double s) const;
  double smooth_part(double s) const { return smooth_(s); }
  bool singular() const noexcept { return singular_; }
  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  const std::string& name() const noexcept { return name_; }

  /// Integral of g (or |g|) over [a, b] clipped to the support.
  double integral(double a, double b, std::size_t panels_per_unit = kDefaultPanelsPerUnit) const;
  double abs_integral(double a, double b, std::size_t panels_per_unit = kDefaultPanelsPerUnit) const;
  /// Closed-form total variation when known.
  std::optional<double> analytic_mass() const noexcept { return analytic_mass_; }
  /// int |g| over (from, inf).
  double tail(double from) const;

private:
  Density() = default;
  double integrate(double a, double b, std::size_t panels_per_unit, bool absolute) const;

  std::function<double(double)> smooth_;
  bool singular_ = false;
  double start_ = 0.0;
  double end_ = kInf;
  std::string name_;
  std::optional<double> analytic_mass_;
  std::function<double(double)> analytic_tail_;
  std::vector<double> nodes_;  // breakpoints for grid densities
};

struct Atom {
  double location;
  double weight;
};

// Finite atom set plus optional L1 density on [0, inf).
class Measure {
public:
  Measure() = default;
  Measure(std::vector<Atom> atoms, std::optional<Density> density);

  static Measure dirac(double location, double weight = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<Density>& density() const noexcept { return density_; }
  bool empty() const noexcept { return atoms_.empty() && !density_; }

  /// sum |a_k| + int |g| over [0, truncation]; closed form where available.
  double total_variation(double truncation = kInf) const;
  /// Mass strictly beyond `from`, i.e. what a domain truncated at `from` loses.
  double tail_mass(double from) const;

private:
  std::vector<Atom> atoms_;
  std::optional<Density> density_;
};

/// Parse "t0:w0,t1:w1" into atoms.
std::vector<Atom> parse_atoms(const std::string& text);

}  // namespace funnelsim
