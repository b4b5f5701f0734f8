#pragma once

// O(N^2) reference paths for the indexed neighbour searches.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geoc/neighbors.hpp"
#include "geoc/series.hpp"

namespace geoc::brute {

inline double brute_kth_distance(const PointCloud& cloud, std::size_t i, std::size_t k,
                                 std::size_t theiler) {
  std::vector<double> d;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const std::size_t gap = i > j ? i - j : j - i;
    if (j == i || gap <= theiler) continue;
    d.push_back(chebyshev(cloud.point(i), cloud.point(j)));
  }
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
  return d[k - 1];
}

struct BrutePairCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t admissible = 0;
};

inline BrutePairCounts brute_pair_counts(const PointCloud& cloud, std::span<const double> radii,
                                         std::size_t theiler) {
  BrutePairCounts out;
  out.counts.assign(radii.size(), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + theiler + 1; j < cloud.size(); ++j) {
      ++out.admissible;
      const double d = chebyshev(cloud.point(i), cloud.point(j));
      for (std::size_t r = 0; r < radii.size(); ++r) {
        if (d < radii[r]) ++out.counts[r];
      }
    }
  }
  return out;
}

}  // namespace geoc::brute
