#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geoc/series.hpp"

namespace geoc {

struct CorrelationSumCurve {
  std::vector<double> radii;                // strictly increasing
  std::vector<double> csum;                 // fraction of admissible pairs with d < r
  std::vector<std::uint64_t> pair_counts;   // numerators of csum
  std::uint64_t admissible_pairs = 0;       // denominator of csum
  std::size_t n_points = 0;
  std::size_t theiler = 0;
  std::size_t reference_points = 0;         // == n_points when every pair is counted
};

/// Above this many points the sum is taken over an evenly strided subset of
/// reference points against all others.
inline constexpr std::size_t kDefaultMaxReferencePoints = 10000;

/// Grassberger-Procaccia correlation sum with the Chebyshev metric and strict
/// inequality d < r. Pairs with |i - j| <= theiler are not admissible. When
/// N <= max_reference_points every unordered pair is counted.
CorrelationSumCurve correlation_sum(const PointCloud& cloud, std::span<const double> radii,
                                    std::size_t theiler,
                                    std::size_t max_reference_points = kDefaultMaxReferencePoints);

/// Radius grid, scaling-region and Theiler policy for D2 estimation.
struct D2Params {
  std::size_t n_radii = 40;
  double lo_percentile = 0.01;  // of sampled pairwise distances
  double hi_percentile = 0.50;
  std::size_t pair_sample = 10000;
  std::size_t fit_window = 5;   // radii per local slope
  double slope_tolerance = 0.1; // max |local slope - run mean|
  std::size_t min_run = 3;      // local slopes in the shortest acceptable run
  std::size_t theiler = 0;
  std::size_t max_reference_points = kDefaultMaxReferencePoints;
  bool standardize = false;
};

/// Log-spaced radii between the configured percentiles of a deterministic
/// sample of admissible pairwise distances.
std::vector<double> radius_grid(const PointCloud& cloud, const D2Params& params);

struct D2Estimate {
  double value = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double slope_stderr = 0.0;
  std::size_t fit_first = 0;  // radius indices, inclusive
  std::size_t fit_last = 0;
  std::vector<double> local_slopes;  // NaN where a window touches csum == 0
  CorrelationSumCurve curve;
};

/// Least-squares slope of ln C vs ln r over the longest run of local slopes
/// that all stay within slope_tolerance of the run mean.
D2Estimate fit_d2(const CorrelationSumCurve& curve, const D2Params& params = {});

/// radius_grid + correlation_sum + fit_d2.
D2Estimate estimate_d2(const PointCloud& cloud, const D2Params& params);

/// D2(target) - D2(base), both estimated under the same policy.
double geoc_conditional(const PointCloud& target, const PointCloud& base, const D2Params& params);

struct GeoCParams {
  D2Params d2;
  std::size_t min_points = 1000;
  double stderr_warning = 0.1;
};

struct GeoCResult {
  double geoc_cond_x = 0.0;   // GeoC(X'|X)
  double geoc_cond_xy = 0.0;  // GeoC(X'|X,Y)
  double geoc = 0.0;          // geoc_cond_x - geoc_cond_xy
  D2Estimate d2_x;
  D2Estimate d2_xxp;
  D2Estimate d2_xy;
  D2Estimate d2_xyxp;
  std::vector<std::string> warnings;
};

GeoCResult geoc(const CouplingSample& sample, const GeoCParams& params);
GeoCResult geoc(const TimeSeries& x, const TimeSeries& y, const GeoCParams& params);

}  // namespace geoc
