#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geoc/series.hpp"

namespace geoc {

inline double chebyshev(std::span<const double> a, std::span<const double> b) noexcept {
  double d = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double v = a[c] > b[c] ? a[c] - b[c] : b[c] - a[c];
    if (v > d) d = v;
  }
  return d;
}

/// Static k-d tree under the Chebyshev (max-coordinate) metric.
///
/// Neighbour queries exclude the query point itself and every point whose
/// original index lies within `theiler` of the query's index. Distances are
/// computed with the same expression as chebyshev(), so results agree bit for
/// bit with a brute-force scan.
class KdTree {
 public:
  explicit KdTree(const PointCloud& cloud, std::size_t leaf_size = 12);

  std::size_t size() const noexcept { return index_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// Distance from point `i` to its k-th nearest admissible neighbour.
  double kth_distance(std::size_t i, std::size_t k, std::size_t theiler) const;

  /// kth_distance for every point, computed in parallel.
  std::vector<double> kth_distances(std::size_t k, std::size_t theiler) const;

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left;   // -1 for leaves
    std::int32_t right;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size,
                     std::vector<std::uint32_t>& order, const PointCloud& cloud);
  double box_distance(std::size_t node, std::span<const double> q) const noexcept;

  std::size_t dim_;
  std::vector<double> coords_;        // points in tree order
  std::vector<std::uint32_t> index_;  // tree order -> original index
  std::vector<std::uint32_t> rank_;   // original index -> tree order
  std::vector<Node> nodes_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
};

}  // namespace geoc
