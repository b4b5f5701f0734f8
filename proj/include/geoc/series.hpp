#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geoc {

/// Ordered scalar samples. Values are finite and there are at least two.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> values, std::string name = {},
             std::optional<double> time_step = std::nullopt);

  const std::vector<double>& values() const noexcept { return values_; }
  const std::string& name() const noexcept { return name_; }
  std::optional<double> time_step() const noexcept { return time_step_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Contiguous sub-range [first, first + count) under a new name.
  TimeSeries slice(std::size_t first, std::size_t count, std::string name) const;

 private:
  std::vector<double> values_;
  std::string name_;
  std::optional<double> time_step_;
};

/// N points in R^dim, stored row-major.
class PointCloud {
 public:
  PointCloud(std::size_t dim, std::vector<double> coords, std::string provenance = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double at(std::size_t i, std::size_t c) const { return coords_[i * dim_ + c]; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::string& provenance() const noexcept { return provenance_; }

  /// New cloud with every coordinate multiplied by `factor`.
  PointCloud scaled(double factor) const;
  /// Cloud made of coordinate columns [0, count).
  PointCloud prefix(std::size_t count) const;

  friend bool operator==(const PointCloud& a, const PointCloud& b) {
    return a.dim_ == b.dim_ && a.coords_ == b.coords_;
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::string provenance_;
};

struct JoinRole {
  std::string label;
  std::size_t lag = 0;
};

/// Ordered coordinate roles: row t of a join is (s_1[t + lag_1], ..., s_k[t + lag_k]).
struct JoinSpec {
  std::vector<JoinRole> roles;
};

/// Builds the delay/join cloud. All referenced series must have equal length;
/// the row count is that length minus the largest lag.
PointCloud join(std::span<const TimeSeries> series, const JoinSpec& spec);

struct AffineMap {
  double mean = 0.0;
  double scale = 1.0;  // population standard deviation
};

/// Rescales every coordinate to zero mean and unit (population) standard
/// deviation. Throws DegenerateCoordinateError for a constant column.
PointCloud standardize(const PointCloud& cloud, std::vector<AffineMap>* maps = nullptr);

/// The (x, y, x') triple every coupling estimator works on. For a time series
/// x' is x shifted by one step; for i.i.d. synthetic draws it is stored
/// explicitly.
struct CouplingSample {
  TimeSeries x;
  TimeSeries y;
  TimeSeries x_next;

  /// (x_n, y_n, x_{n+1}) for n = 0 .. N-2.
  static CouplingSample from_series(const TimeSeries& x, const TimeSeries& y);
  /// Explicit triples, e.g. i.i.d. draws; all three must have equal length.
  static CouplingSample from_triples(TimeSeries x, TimeSeries y, TimeSeries x_next);

  std::size_t size() const noexcept { return x.size(); }

  PointCloud cloud_x() const;
  PointCloud cloud_x_xnext() const;
  PointCloud cloud_x_y() const;
  PointCloud cloud_x_y_xnext() const;
};

}  // namespace geoc
