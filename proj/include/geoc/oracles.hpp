#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "geoc/density.hpp"
#include "geoc/noise.hpp"
#include "geoc/synth.hpp"

namespace geoc {

/// Conditional entropy or transfer entropy of a noiseless deterministic map.
inline constexpr double kDivergent = std::numeric_limits<double>::infinity();

inline bool is_divergent(double v) noexcept { return std::isinf(v); }

/// Differential entropy of the noise term: ln(eps) or 0.5 ln(2 pi e eps^2).
double noise_entropy(const NoiseSpec& noise);

/// Strictly monotone scalar map u = f(y) with a closed-form inverse.
struct MonotoneMap {
  std::function<double(double)> forward;
  std::function<double(double)> inverse;
  std::function<double(double)> derivative;

  /// u = b * m(y) for m in {identity, square, log}. Square requires y >= 0 and
  /// log requires y > 0 on the support; those checks happen at pushforward time.
  static MonotoneMap scaled(Selector m, double b);
};

/// Density of f(Y) with exact cell masses F_Y(f^-1(b)) - F_Y(f^-1(a)).
/// Throws SingularMapError when f' vanishes on the support.
Density1D pushforward_density_1d(const Density1D& py, const MonotoneMap& f,
                                 std::size_t cells = 0);

/// Density of U + Z as exact cell averages on a grid with the same spacing as
/// `pu`. Throws ResolutionError if the result's mass drifts by more than 1e-6.
Density1D convolve(const Density1D& pu, const NoiseSpec& noise);

/// x' = a g(x) + b m(y) + c, with m restricted to identity, square or log.
struct AdditiveMap {
  double a = 1.0;
  Selector g = Selector::identity;
  double b = 1.0;
  Selector m = Selector::identity;
  double c = 0.0;

  double operator()(double x, double y) const;
};

struct SemianalyticOptions {
  std::size_t cells = 4096;       // inner grid resolution M
  std::size_t outer_nodes = 64;   // midpoint nodes of the expectation over X
};

struct SemianalyticResult {
  double value = 0.0;             // h(X'|X) at resolution M, nats
  double value_half = 0.0;        // same at M / 2
  double error_estimate = 0.0;    // |value - value_half| / 3
};

/// h(X'|X) by change of variables, convolution with the noise, the inner
/// entropy integral and an outer expectation over X. A missing noise spec
/// gives the noiseless limit h(b m(Y)).
SemianalyticResult h_cond_semianalytic(const AdditiveMap& f, const Density1D& px,
                                       const Density1D& py, const std::optional<NoiseSpec>& noise,
                                       const SemianalyticOptions& options = {});

/// h(X'|X,Y): the noise entropy, or -infinity without noise.
double h_cond_full(const std::optional<NoiseSpec>& noise);

/// TE for x' = x + b y + U(-eps/2, eps/2) with uniform inputs:
/// 0 for b = 0, else ln(b / eps) + eps / (2b). Throws DomainError for b < 0.
double te_noisy_linear(double b, double eps);

struct Rect {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;

  double area() const noexcept { return (x_hi - x_lo) * (y_hi - y_lo); }
};

/// ln |(f(x_max, y_max) - f(x_max, y_min)) / eps + 1|. Throws
/// PreconditionError when sampling finds f decreasing in either argument.
double te_upper_bound(const std::function<double(double, double)>& f, const Rect& domain,
                      double eps);

}  // namespace geoc
