#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "geoc/density.hpp"
#include "geoc/oracles.hpp"

namespace geoc {

/// Piecewise-constant density on a rectangle, nx * ny cells, row-major in y
/// (cell (i, j) at index j * nx + i).
class DensityGrid {
 public:
  /// Throws ArgumentError unless values are finite, >= 0 and integrate to 1
  /// within 1e-8.
  DensityGrid(Rect domain, std::size_t nx, std::size_t ny, std::vector<double> values);

  static DensityGrid uniform(Rect domain, std::size_t nx, std::size_t ny);
  /// Midpoint-sampled and normalized.
  static DensityGrid from_pdf(Rect domain, std::size_t nx, std::size_t ny,
                              const std::function<double(double, double)>& pdf);

  const Rect& domain() const noexcept { return domain_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double dx() const noexcept { return (domain_.x_hi - domain_.x_lo) / static_cast<double>(nx_); }
  double dy() const noexcept { return (domain_.y_hi - domain_.y_lo) / static_cast<double>(ny_); }
  const std::vector<double>& values() const noexcept { return v_; }
  /// Value of the cell containing (x, y); 0 outside the domain.
  double at(double x, double y) const noexcept;
  /// Marginal density of x.
  Density1D x_marginal() const;

 private:
  Rect domain_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> v_;
};

/// f(x, y) with its partial derivatives.
struct Map2D {
  std::function<double(double, double)> f;
  std::function<double(double, double)> fx;
  std::function<double(double, double)> fy;

  static Map2D linear(double a, double b, double c = 0.0);  // a x + b y + c
  static Map2D from_additive(const AdditiveMap& m);
};

/// f(x) with its derivative.
struct Map1D {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

struct Point2 {
  double x;
  double y;
};

struct LevelSet {
  double value = 0.0;
  std::vector<std::vector<Point2>> chains;  // polylines; closed loops repeat the first vertex
};

/// Marching squares on a lattice of nx * ny cells over `domain`, with crossings
/// refined by bisection along cell edges until |f - value| <= 1e-8.
LevelSet extract_level_set(const Map2D& map, const Rect& domain, std::size_t nx, std::size_t ny,
                           double value);

struct PushforwardResult {
  Density1D density;
  double raw_mass = 1.0;  // integral before renormalization
  std::vector<std::string> warnings;
};

/// Branchwise change of variables with exact cell masses; the output grid
/// spans the image of the support. Interior critical points are reported as
/// warnings.
PushforwardResult fp_pushforward_1d(const Density1D& rho, const Map1D& map, std::size_t cells = 0);

enum class LineKernel {
  paper,   // 1 / (|f_x| + |f_y|)
  coarea,  // 1 / |grad f|
};

std::string to_string(LineKernel k);
LineKernel line_kernel_from_string(const std::string& name);

/// Raw level-set integrals of rho * kernel along L_{x'} for each level.
/// Throws RankDeficiencyError if both partials fall below 1e-10 on a level set.
std::vector<double> level_integrals(const DensityGrid& rho, const Map2D& map,
                                    const std::vector<double>& levels, LineKernel kernel);

/// Density of x' = f(x, y) on `cells` cells over [lo, hi]: cell masses of the
/// level-set integrals, integrated over each cell and renormalized.
PushforwardResult asymmetric_pushforward(const DensityGrid& rho, const Map2D& map, double lo,
                                         double hi, std::size_t cells,
                                         LineKernel kernel = LineKernel::paper);

/// Box density of x' near f(x0): height 1 / (2 eps |f'(x0)|).
Density1D conditional_density_box(const Map1D& map, double x0, double eps);
/// Box density of x' near f(x0, y0): height 1 / (2 eps (|f_x| + |f_y|)).
Density1D conditional_density_box(const Map2D& map, double x0, double y0, double eps);

struct QuadratureOptions {
  std::size_t nx = 512;
  std::size_t ny = 512;
};

/// 0.5 * || 1/(|f_x| + |f_y|) - 1/|f_x| ||^2 in L1 of the uniform density on
/// `domain`, by midpoint quadrature. Throws NearSingularError when |f_x| <
/// 1e-10 on more than 1% of the cells.
double pinsker_lower_bound(const Map2D& map, const Rect& domain, const QuadratureOptions& quad = {});

struct SmallBApprox {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// (Vol / 2) <|f_y|>^2 / <|f_x|>^4 with domain averages by midpoint quadrature.
SmallBApprox small_b_approx(const Map2D& map, const Rect& domain, const QuadratureOptions& quad = {});

/// Empirical L1 distance between the conditional density of f(X) + noise
/// given X in (x0 - eps, x0 + eps), with X ~ rho, and conditional_density_box.
/// Samples are stratified over the window and over uniform noise of width
/// eps^2, then binned into `bins` bins over the box support; mass outside the
/// box counts in full.
double box_limit_error(const Map1D& map, const std::function<double(double)>& rho, double x0,
                       double eps, std::size_t bins = 32);
/// Same with (X, Y) ~ rho restricted to the square window around (x0, y0).
double box_limit_error(const Map2D& map, const std::function<double(double, double)>& rho,
                       double x0, double y0, double eps, std::size_t bins = 32);

}  // namespace geoc
