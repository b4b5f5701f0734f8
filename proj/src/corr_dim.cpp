#include "geoc/corr_dim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "geoc/error.hpp"
#include "geoc/neighbors.hpp"
#include "geoc/parallel.hpp"
#include "geoc/rng.hpp"

namespace geoc {

namespace {

std::size_t gap(std::size_t i, std::size_t j) noexcept { return i > j ? i - j : j - i; }

// Index of the first radius strictly greater than d, i.e. the first r with d < r.
std::size_t bin_of(std::span<const double> radii, double d) noexcept {
  return static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), d) -
                                  radii.begin());
}

struct OlsFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

OlsFit ols(std::span<const double> x, std::span<const double> y) {
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  OlsFit f;
  f.slope = sxy / sxx;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - my - f.slope * (x[i] - mx);
      ssr += r * r;
    }
    f.stderr_slope = std::sqrt(ssr / (m - 2.0) / sxx);
  }
  return f;
}

}  // namespace

CorrelationSumCurve correlation_sum(const PointCloud& cloud, std::span<const double> radii,
                                    std::size_t theiler, std::size_t max_reference_points) {
  if (radii.empty()) throw ArgumentError("correlation_sum: empty radius list");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
      throw ArgumentError("correlation_sum: radii must be positive and finite");
    }
    if (k && !(radii[k] > radii[k - 1])) {
      throw ArgumentError("correlation_sum: radii must be strictly increasing");
    }
  }
  const std::size_t n = cloud.size();
  if (n < 2) throw InsufficientDataError("correlation_sum needs at least 2 points");
  if (max_reference_points == 0) throw ArgumentError("max_reference_points must be positive");

  const std::size_t dim = cloud.dim();
  const double r_max = radii.back();

  // Sweep along the first coordinate: pairs further apart than r_max in that
  // coordinate cannot be closer than any radius.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return cloud.at(a, 0) < cloud.at(b, 0);
  });
  std::vector<double> sorted(n * dim);
  std::vector<double> key(n);
  std::vector<std::uint32_t> rank(n);
  for (std::size_t p = 0; p < n; ++p) {
    rank[order[p]] = static_cast<std::uint32_t>(p);
    key[p] = cloud.at(order[p], 0);
    for (std::size_t c = 0; c < dim; ++c) sorted[p * dim + c] = cloud.at(order[p], c);
  }
  auto point_at = [&](std::size_t p) { return std::span<const double>(&sorted[p * dim], dim); };

  const bool all_pairs = n <= max_reference_points;
  const std::size_t refs = all_pairs ? n : max_reference_points;
  const std::size_t bins = radii.size() + 1;
  const std::size_t workers = thread_count();
  std::vector<std::vector<std::uint64_t>> partial(std::max<std::size_t>(1, std::min(workers, refs)),
                                                  std::vector<std::uint64_t>(bins, 0));

  parallel_chunks(refs, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    auto& hist = partial[w];
    for (std::size_t m = begin; m < end; ++m) {
      if (all_pairs) {
        // Unordered pairs: position p against later positions only.
        const std::size_t p = m;
        const std::size_t i = order[p];
        const auto pi = point_at(p);
        for (std::size_t q = p + 1; q < n && key[q] - key[p] < r_max; ++q) {
          if (gap(i, order[q]) <= theiler) continue;
          const double d = chebyshev(pi, point_at(q));
          if (d < r_max) ++hist[bin_of(radii, d)];
        }
      } else {
        const std::size_t i = m * n / refs;
        const std::size_t p = rank[i];
        const auto pi = point_at(p);
        for (std::size_t q = p + 1; q < n && key[q] - key[p] < r_max; ++q) {
          if (gap(i, order[q]) <= theiler) continue;
          const double d = chebyshev(pi, point_at(q));
          if (d < r_max) ++hist[bin_of(radii, d)];
        }
        for (std::size_t q = p; q-- > 0 && key[p] - key[q] < r_max;) {
          if (gap(i, order[q]) <= theiler) continue;
          const double d = chebyshev(pi, point_at(q));
          if (d < r_max) ++hist[bin_of(radii, d)];
        }
      }
    }
  });

  CorrelationSumCurve curve;
  curve.radii.assign(radii.begin(), radii.end());
  curve.n_points = n;
  curve.theiler = theiler;
  curve.reference_points = refs;

  if (all_pairs) {
    const std::uint64_t span = theiler + 1 >= n ? 0 : n - theiler - 1;
    curve.admissible_pairs = span * (span + 1) / 2;
  } else {
    std::uint64_t total = 0;
    for (std::size_t m = 0; m < refs; ++m) {
      const std::size_t i = m * n / refs;
      const std::size_t excluded = 1 + std::min(theiler, i) + std::min(theiler, n - 1 - i);
      total += n > excluded ? n - excluded : 0;
    }
    curve.admissible_pairs = total;
  }
  if (curve.admissible_pairs == 0) {
    throw DegeneratePairsError("every pair is excluded by the Theiler window " +
                               std::to_string(theiler));
  }

  std::vector<std::uint64_t> hist(bins, 0);
  for (const auto& h : partial) {
    for (std::size_t b = 0; b < bins; ++b) hist[b] += h[b];
  }
  curve.pair_counts.resize(radii.size());
  curve.csum.resize(radii.size());
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    running += hist[k];
    curve.pair_counts[k] = running;
    curve.csum[k] = static_cast<double>(running) / static_cast<double>(curve.admissible_pairs);
  }
  return curve;
}

std::vector<double> radius_grid(const PointCloud& cloud, const D2Params& params) {
  const std::size_t n = cloud.size();
  if (params.n_radii < 2) throw ArgumentError("need at least 2 radii");
  if (!(params.lo_percentile > 0.0 && params.lo_percentile < params.hi_percentile &&
        params.hi_percentile <= 1.0)) {
    throw ArgumentError("radius percentiles must satisfy 0 < lo < hi <= 1");
  }

  std::vector<double> dist;
  const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (all_pairs <= params.pair_sample) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (gap(i, j) > params.theiler) dist.push_back(chebyshev(cloud.point(i), cloud.point(j)));
      }
    }
  } else {
    CounterRng rng(0x5eed'd157ULL);
    dist.reserve(params.pair_sample);
    std::size_t attempts = 0;
    while (dist.size() < params.pair_sample && attempts < 20 * params.pair_sample) {
      ++attempts;
      const auto i = static_cast<std::size_t>(rng.next_bits() % n);
      const auto j = static_cast<std::size_t>(rng.next_bits() % n);
      if (gap(i, j) <= params.theiler) continue;
      dist.push_back(chebyshev(cloud.point(i), cloud.point(j)));
    }
  }
  if (dist.size() < 2) throw DegeneratePairsError("too few admissible pairs to pick radii");
  std::sort(dist.begin(), dist.end());

  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(dist.size() - 1);
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    return k + 1 < dist.size() ? dist[k] + frac * (dist[k + 1] - dist[k]) : dist[k];
  };
  double lo = quantile(params.lo_percentile);
  const double hi = quantile(params.hi_percentile);
  if (!(lo > 0.0)) {
    auto it = std::upper_bound(dist.begin(), dist.end(), 0.0);
    if (it == dist.end()) throw DegeneratePairsError("all sampled pairwise distances are zero");
    lo = *it;
  }
  if (!(hi > lo)) throw DegeneratePairsError("radius range collapses (lo >= hi)");

  std::vector<double> radii(params.n_radii);
  const double step = std::log(hi / lo) / static_cast<double>(params.n_radii - 1);
  for (std::size_t k = 0; k < params.n_radii; ++k) {
    radii[k] = lo * std::exp(step * static_cast<double>(k));
  }
  radii.front() = lo;
  radii.back() = hi;
  return radii;
}

D2Estimate fit_d2(const CorrelationSumCurve& curve, const D2Params& params) {
  const std::size_t K = curve.radii.size();
  const std::size_t w = params.fit_window;
  if (w < 2) throw ArgumentError("fit window must cover at least 2 radii");
  if (K < 8 || K < w) throw ArgumentError("fit_d2 needs at least 8 radii");
  if (std::none_of(curve.csum.begin(), curve.csum.end(),
                   [](double c) { return c > 0.0 && c < 1.0; })) {
    throw NoScalingRegionError("correlation sum never lies strictly between 0 and 1", {});
  }

  std::vector<double> lr(K);
  std::vector<double> lc(K);
  for (std::size_t k = 0; k < K; ++k) {
    lr[k] = std::log(curve.radii[k]);
    lc[k] = curve.csum[k] > 0.0 ? std::log(curve.csum[k])
                                : -std::numeric_limits<double>::infinity();
  }

  const std::size_t n_windows = K - w + 1;
  std::vector<double> local(n_windows, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < n_windows; ++s) {
    if (!std::isfinite(lc[s])) continue;  // csum nondecreasing: later entries are finite too
    local[s] = ols({&lr[s], w}, {&lc[s], w}).slope;
  }

  // Longest run [s, e] of valid local slopes, all within tolerance of the run
  // mean; ties go to the tighter run, then to smaller radii.
  std::size_t best_s = 0;
  std::size_t best_len = 0;
  double best_dev = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n_windows; ++s) {
    if (std::isnan(local[s])) continue;
    double sum = 0.0;
    for (std::size_t e = s; e < n_windows && !std::isnan(local[e]); ++e) {
      sum += local[e];
      const double mean = sum / static_cast<double>(e - s + 1);
      double dev = 0.0;
      for (std::size_t j = s; j <= e; ++j) dev = std::max(dev, std::abs(local[j] - mean));
      if (!(dev < params.slope_tolerance)) continue;
      const std::size_t len = e - s + 1;
      if (len > best_len || (len == best_len && dev < best_dev)) {
        best_s = s;
        best_len = len;
        best_dev = dev;
      }
    }
  }
  if (best_len < std::max<std::size_t>(params.min_run, 1)) {
    std::ostringstream os;
    os << "no scaling region of " << params.min_run << " consistent local slopes (longest run "
       << best_len << ")";
    throw NoScalingRegionError(os.str(), local);
  }

  D2Estimate est;
  est.fit_first = best_s;
  est.fit_last = best_s + best_len - 1 + (w - 1);
  const std::size_t m = est.fit_last - est.fit_first + 1;
  const OlsFit fit = ols({&lr[est.fit_first], m}, {&lc[est.fit_first], m});
  est.value = fit.slope;
  est.slope_stderr = fit.stderr_slope;
  est.r_lo = curve.radii[est.fit_first];
  est.r_hi = curve.radii[est.fit_last];
  est.local_slopes = std::move(local);
  est.curve = curve;
  return est;
}

D2Estimate estimate_d2(const PointCloud& cloud, const D2Params& params) {
  const PointCloud work = params.standardize ? standardize(cloud) : cloud;
  const std::vector<double> radii = radius_grid(work, params);
  return fit_d2(correlation_sum(work, radii, params.theiler, params.max_reference_points),
                params);
}

double geoc_conditional(const PointCloud& target, const PointCloud& base, const D2Params& params) {
  if (target.size() != base.size()) {
    throw LengthError("target and base clouds must have the same number of points");
  }
  if (target.dim() <= base.dim() || !(target.prefix(base.dim()) == base)) {
    throw ArgumentError("target cloud must extend the base cloud by the future coordinate");
  }
  return estimate_d2(target, params).value - estimate_d2(base, params).value;
}

GeoCResult geoc(const CouplingSample& sample, const GeoCParams& params) {
  if (sample.size() < params.min_points) {
    throw InsufficientDataError("GeoC needs at least " + std::to_string(params.min_points) +
                                " points, got " + std::to_string(sample.size()));
  }
  GeoCResult r;
  r.d2_x = estimate_d2(sample.cloud_x(), params.d2);
  r.d2_xxp = estimate_d2(sample.cloud_x_xnext(), params.d2);
  r.d2_xy = estimate_d2(sample.cloud_x_y(), params.d2);
  r.d2_xyxp = estimate_d2(sample.cloud_x_y_xnext(), params.d2);
  r.geoc_cond_x = r.d2_xxp.value - r.d2_x.value;
  r.geoc_cond_xy = r.d2_xyxp.value - r.d2_xy.value;
  r.geoc = r.geoc_cond_x - r.geoc_cond_xy;

  const std::pair<const char*, const D2Estimate*> all[] = {
      {"D2(X)", &r.d2_x}, {"D2(X,X')", &r.d2_xxp}, {"D2(X,Y)", &r.d2_xy},
      {"D2(X,Y,X')", &r.d2_xyxp}};
  for (const auto& [name, est] : all) {
    if (est->slope_stderr > params.stderr_warning) {
      std::ostringstream os;
      os << name << " slope stderr " << est->slope_stderr << " exceeds "
         << params.stderr_warning;
      r.warnings.push_back(os.str());
    }
  }
  return r;
}

GeoCResult geoc(const TimeSeries& x, const TimeSeries& y, const GeoCParams& params) {
  return geoc(CouplingSample::from_series(x, y), params);
}

}  // namespace geoc
