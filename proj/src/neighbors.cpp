#include "geoc/neighbors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

bool excluded(std::size_t i, std::size_t j, std::size_t theiler) noexcept {
  const std::size_t gap = i > j ? i - j : j - i;
  return gap <= theiler;
}

// Sorted list of the k smallest distances seen so far.
class KBest {
 public:
  explicit KBest(std::size_t k) : d_(k, std::numeric_limits<double>::infinity()) {}
  double worst() const noexcept { return d_.back(); }
  void offer(double v) noexcept {
    if (!(v < d_.back())) return;
    std::size_t p = d_.size() - 1;
    while (p > 0 && d_[p - 1] > v) {
      d_[p] = d_[p - 1];
      --p;
    }
    d_[p] = v;
  }

 private:
  std::vector<double> d_;
};

void check_k(std::size_t n, std::size_t k, std::size_t theiler) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  // Every point needs k admissible neighbours; the worst case is a point in the
  // middle of the series, which loses 2*theiler + 1 candidates.
  if (k + 2 * theiler + 1 > n) {
    throw ArgumentError("k = " + std::to_string(k) + " with theiler = " + std::to_string(theiler) +
                        " is too large for N = " + std::to_string(n));
  }
}

}  // namespace

KdTree::KdTree(const PointCloud& cloud, std::size_t leaf_size) : dim_(cloud.dim()) {
  const std::size_t n = cloud.size();
  if (n > std::numeric_limits<std::uint32_t>::max() / 2) {
    throw ArgumentError("point cloud too large for the neighbour index");
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  nodes_.reserve(2 * n / std::max<std::size_t>(leaf_size, 1) + 2);
  build(0, static_cast<std::uint32_t>(n), std::max<std::size_t>(leaf_size, 1), order, cloud);

  coords_.resize(n * dim_);
  index_ = order;
  rank_.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    rank_[order[t]] = static_cast<std::uint32_t>(t);
    for (std::size_t c = 0; c < dim_; ++c) coords_[t * dim_ + c] = cloud.at(order[t], c);
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size,
                           std::vector<std::uint32_t>& order, const PointCloud& cloud) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1});
  box_lo_.resize(box_lo_.size() + dim_, std::numeric_limits<double>::infinity());
  box_hi_.resize(box_hi_.size() + dim_, -std::numeric_limits<double>::infinity());
  double* lo = &box_lo_[static_cast<std::size_t>(id) * dim_];
  double* hi = &box_hi_[static_cast<std::size_t>(id) * dim_];
  for (std::uint32_t t = begin; t < end; ++t) {
    for (std::size_t c = 0; c < dim_; ++c) {
      const double v = cloud.at(order[t], c);
      lo[c] = std::min(lo[c], v);
      hi[c] = std::max(hi[c], v);
    }
  }
  if (end - begin <= leaf_size) return id;

  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (hi[c] - lo[c] > widest) {
      widest = hi[c] - lo[c];
      axis = c;
    }
  }
  if (widest <= 0.0) return id;  // all points identical

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return cloud.at(a, axis) < cloud.at(b, axis);
                   });
  const std::int32_t left = build(begin, mid, leaf_size, order, cloud);
  const std::int32_t right = build(mid, end, leaf_size, order, cloud);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double KdTree::box_distance(std::size_t node, std::span<const double> q) const noexcept {
  const double* lo = &box_lo_[node * dim_];
  const double* hi = &box_hi_[node * dim_];
  double d = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    double v = 0.0;
    if (q[c] < lo[c]) v = lo[c] - q[c];
    else if (q[c] > hi[c]) v = q[c] - hi[c];
    if (v > d) d = v;
  }
  return d;
}

double KdTree::kth_distance(std::size_t i, std::size_t k, std::size_t theiler) const {
  check_k(size(), k, theiler);
  const std::span<const double> q(&coords_[static_cast<std::size_t>(rank_[i]) * dim_], dim_);
  KBest best(k);

  // Explicit stack; children are pushed far-first so the near child pops first.
  std::int32_t stack[128];
  std::size_t top = 0;
  stack[top++] = 0;
  while (top) {
    const auto node = static_cast<std::size_t>(stack[--top]);
    if (!(box_distance(node, q) < best.worst())) continue;
    const Node& nd = nodes_[node];
    if (nd.left < 0) {
      for (std::uint32_t t = nd.begin; t < nd.end; ++t) {
        if (excluded(i, index_[t], theiler)) continue;
        best.offer(chebyshev(q, {&coords_[static_cast<std::size_t>(t) * dim_], dim_}));
      }
      continue;
    }
    const double dl = box_distance(static_cast<std::size_t>(nd.left), q);
    const double dr = box_distance(static_cast<std::size_t>(nd.right), q);
    if (dl <= dr) {
      stack[top++] = nd.right;
      stack[top++] = nd.left;
    } else {
      stack[top++] = nd.left;
      stack[top++] = nd.right;
    }
  }
  return best.worst();
}

std::vector<double> KdTree::kth_distances(std::size_t k, std::size_t theiler) const {
  check_k(size(), k, theiler);
  std::vector<double> out(size());
  parallel_chunks(size(), thread_count(), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = kth_distance(i, k, theiler);
  });
  return out;
}

}  // namespace geoc
