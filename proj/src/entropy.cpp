#include "geoc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>

#include "geoc/error.hpp"
#include "geoc/neighbors.hpp"
#include "geoc/rng.hpp"

namespace geoc {

PointCloud separate_duplicates(const PointCloud& cloud, std::size_t* duplicates) {
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (cloud.at(a, c) != cloud.at(b, c)) return cloud.at(a, c) < cloud.at(b, c);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);

  std::vector<std::size_t> dup;
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t a = order[t - 1];
    const std::size_t b = order[t];
    bool same = true;
    for (std::size_t c = 0; c < dim && same; ++c) same = cloud.at(a, c) == cloud.at(b, c);
    if (same) dup.push_back(b);
  }
  if (duplicates) *duplicates = dup.size();
  if (dup.empty()) return cloud;
  if (10 * dup.size() > n) {
    throw DuplicatePointsError(std::to_string(dup.size()) + " of " + std::to_string(n) +
                               " points are exact duplicates (limit 10%)");
  }

  std::vector<double> range(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, cloud.at(i, c));
      hi = std::max(hi, cloud.at(i, c));
    }
    range[c] = hi - lo;
  }

  const CounterRng jitter(0x6a17'7e42ULL);
  std::vector<double> coords(cloud.coords());
  for (std::size_t i : dup) {
    for (std::size_t c = 0; c < dim; ++c) {
      double& v = coords[i * dim + c];
      const double scale = range[c] > 0.0 ? range[c] : std::max(1.0, std::abs(v));
      const double step = std::max(1e-12 * scale,
                                   8.0 * std::numeric_limits<double>::epsilon() * std::abs(v));
      v += step * (0.5 + jitter.uniform_at(i * dim + c));
    }
  }
  return PointCloud(dim, std::move(coords), cloud.provenance() + " | duplicates jittered");
}

double knn_entropy(const PointCloud& cloud, const KnnParams& params) {
  const std::size_t n = cloud.size();
  if (!(n > params.k + params.theiler + 1)) {
    throw InsufficientDataError("knn_entropy needs N > k + theiler + 1 (N = " + std::to_string(n) +
                                ")");
  }
  const PointCloud clean = separate_duplicates(cloud);
  const KdTree tree(clean);
  const std::vector<double> eps = tree.kth_distances(params.k, params.theiler);

  double sum_log = 0.0;
  for (double e : eps) {
    if (!(e > 0.0)) throw NumericalError("zero neighbour distance after duplicate separation");
    sum_log += std::log(2.0 * e);
  }
  using boost::math::digamma;
  return digamma(static_cast<double>(n)) - digamma(static_cast<double>(params.k)) +
         static_cast<double>(clean.dim()) * sum_log / static_cast<double>(n);
}

double conditional_entropy(const PointCloud& joint, const PointCloud& cond,
                           const KnnParams& params) {
  if (cond.size() != joint.size()) {
    throw LengthError("joint and conditioning clouds differ in size");
  }
  if (cond.dim() >= joint.dim() || !(joint.prefix(cond.dim()) == cond)) {
    throw ArgumentError("conditioning coordinates must be a leading prefix of the joint cloud");
  }
  return knn_entropy(joint, params) - knn_entropy(cond, params);
}

TEEstimate transfer_entropy(const CouplingSample& sample, const KnnParams& params) {
  const std::size_t n = sample.size();
  if (!(n > 10 * params.k)) {
    throw InsufficientDataError("transfer entropy needs N > 10k (N = " + std::to_string(n) +
                                ", k = " + std::to_string(params.k) + ")");
  }
  TEEstimate te;
  te.params = params;
  te.n_used = n;
  te.h_cond_x = conditional_entropy(sample.cloud_x_xnext(), sample.cloud_x(), params);
  te.h_cond_xy = conditional_entropy(sample.cloud_x_y_xnext(), sample.cloud_x_y(), params);
  te.value = te.h_cond_x - te.h_cond_xy;
  if (te.value < 0.0) {
    std::ostringstream os;
    os << "negative transfer entropy estimate " << te.value << " (estimator noise)";
    te.warnings.push_back(os.str());
  }
  return te;
}

TEEstimate transfer_entropy(const TimeSeries& x, const TimeSeries& y, const KnnParams& params) {
  return transfer_entropy(CouplingSample::from_series(x, y), params);
}

}  // namespace geoc
