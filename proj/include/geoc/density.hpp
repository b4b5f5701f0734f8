#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace geoc {

/// Probability density on [lo, hi], stored as cell averages over a uniform
/// grid of M cells. The pdf is piecewise constant and the CDF piecewise linear,
/// so both are exact for the stored representation.
class Density1D {
 public:
  /// Throws ArgumentError unless values are finite, >= 0 and sum * dx == 1
  /// within 1e-8.
  Density1D(double lo, double hi, std::vector<double> cell_averages);

  /// Normalizes the given nonnegative cell masses (not averages).
  static Density1D from_masses(double lo, double hi, std::vector<double> masses);
  /// Exact cell masses cdf(b) - cdf(a) of a distribution supported on [lo, hi].
  static Density1D from_cdf(double lo, double hi, std::size_t cells,
                            const std::function<double(double)>& cdf);
  /// Midpoint-sampled pdf, then normalized.
  static Density1D from_pdf(double lo, double hi, std::size_t cells,
                            const std::function<double(double)>& pdf);
  static Density1D uniform(double lo, double hi, std::size_t cells = 1);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t cells() const noexcept { return p_.size(); }
  double dx() const noexcept { return (hi_ - lo_) / static_cast<double>(p_.size()); }
  const std::vector<double>& values() const noexcept { return p_; }
  double midpoint(std::size_t i) const noexcept { return lo_ + (static_cast<double>(i) + 0.5) * dx(); }

  double pdf(double x) const noexcept;
  double cdf(double x) const noexcept;
  /// Integral of cdf from lo to x (piecewise quadratic).
  double cdf_integral(double x) const noexcept;
  double mass() const noexcept;
  /// -sum p ln p dx, with 0 ln 0 = 0.
  double entropy() const noexcept;
  Density1D shifted(double offset) const;
  /// Same distribution on a grid with `cells / factor` cells.
  Density1D coarsened(std::size_t factor) const;

 private:
  double lo_;
  double hi_;
  std::vector<double> p_;
  std::vector<double> cum_;     // cdf at cell edges
  std::vector<double> cumint_;  // integral of cdf up to cell edges
};

/// Exact L1 distance between two piecewise-constant densities.
double l1_distance(const Density1D& a, const Density1D& b);

}  // namespace geoc
