#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "geoc/series.hpp"

namespace geoc {

struct KnnParams {
  std::size_t k = 4;        // neighbour order
  std::size_t theiler = 0;  // temporal exclusion half-width
};

/// Kozachenko-Leonenko differential entropy in nats, Chebyshev metric:
///   h = psi(N) - psi(k) + d * mean_i ln(2 eps_i)
/// with eps_i the distance from point i to its k-th admissible neighbour.
///
/// Exact duplicate points are separated by a deterministic jitter of
/// 1e-12 * (coordinate range) before the search; more than 10% duplicates is a
/// DuplicatePointsError.
double knn_entropy(const PointCloud& cloud, const KnnParams& params);

/// h(joint) - h(cond), where `cond` holds the leading coordinates of `joint`.
double conditional_entropy(const PointCloud& joint, const PointCloud& cond,
                           const KnnParams& params);

struct TEEstimate {
  double value = 0.0;      // nats, = h_cond_x - h_cond_xy
  double h_cond_x = 0.0;   // h(X'|X)
  double h_cond_xy = 0.0;  // h(X'|X,Y)
  std::size_t n_used = 0;
  KnnParams params;
  std::vector<std::string> warnings;
};

/// T_{y->x} = [h(X,X') - h(X)] - [h(X,Y,X') - h(X,Y)].
TEEstimate transfer_entropy(const CouplingSample& sample, const KnnParams& params);
TEEstimate transfer_entropy(const TimeSeries& x, const TimeSeries& y, const KnnParams& params);

/// Copy of `cloud` with exact duplicates jittered apart (see knn_entropy).
PointCloud separate_duplicates(const PointCloud& cloud, std::size_t* duplicates = nullptr);

}  // namespace geoc
