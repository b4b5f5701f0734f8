#include "geoc/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoc/error.hpp"

namespace geoc {

TimeSeries::TimeSeries(std::vector<double> values, std::string name,
                       std::optional<double> time_step)
    : values_(std::move(values)), name_(std::move(name)), time_step_(time_step) {
  if (values_.size() < 2) {
    throw LengthError("time series '" + name_ + "' needs at least 2 samples");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("time series '" + name_ + "' has a non-finite value at index " +
                      std::to_string(i));
    }
  }
  if (time_step_ && !(*time_step_ > 0.0)) {
    throw ArgumentError("time step must be positive");
  }
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count, std::string name) const {
  if (first + count > values_.size()) {
    throw LengthError("slice exceeds series '" + name_ + "'");
  }
  return TimeSeries(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                        values_.begin() + static_cast<std::ptrdiff_t>(first + count)),
                    std::move(name), time_step_);
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords, std::string provenance)
    : dim_(dim), coords_(std::move(coords)), provenance_(std::move(provenance)) {
  if (dim_ == 0) throw ArgumentError("point cloud dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw LengthError("coordinate count is not a multiple of the dimension");
  }
  if (coords_.empty()) throw LengthError("point cloud is empty");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw DataError("point " + std::to_string(i / dim_) + " has a non-finite coordinate");
    }
  }
}

PointCloud PointCloud::scaled(double factor) const {
  std::vector<double> c(coords_);
  for (double& v : c) v *= factor;
  std::ostringstream os;
  os << provenance_ << " | scaled by " << factor;
  return PointCloud(dim_, std::move(c), os.str());
}

PointCloud PointCloud::prefix(std::size_t count) const {
  if (count == 0 || count > dim_) throw ArgumentError("invalid prefix width");
  const std::size_t n = size();
  std::vector<double> c;
  c.reserve(n * count);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < count; ++k) c.push_back(at(i, k));
  }
  return PointCloud(count, std::move(c), provenance_ + " | first " + std::to_string(count));
}

PointCloud join(std::span<const TimeSeries> series, const JoinSpec& spec) {
  if (spec.roles.empty()) throw ArgumentError("join spec has no roles");

  std::vector<const TimeSeries*> sources;
  sources.reserve(spec.roles.size());
  std::size_t max_lag = 0;
  for (const auto& role : spec.roles) {
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const TimeSeries& s) { return s.name() == role.label; });
    if (it == series.end()) throw LookupError("no series labelled '" + role.label + "'");
    sources.push_back(&*it);
    max_lag = std::max(max_lag, role.lag);
  }

  const std::size_t length = sources.front()->size();
  for (const auto* s : sources) {
    if (s->size() != length) {
      throw LengthError("series '" + s->name() + "' has length " + std::to_string(s->size()) +
                        ", expected " + std::to_string(length));
    }
  }
  if (length <= max_lag) {
    throw LengthError("series of length " + std::to_string(length) +
                      " is too short for lag " + std::to_string(max_lag));
  }

  const std::size_t rows = length - max_lag;
  const std::size_t dim = spec.roles.size();
  std::vector<double> coords(rows * dim);
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t c = 0; c < dim; ++c) {
      coords[t * dim + c] = (*sources[c])[t + spec.roles[c].lag];
    }
  }

  std::ostringstream prov;
  prov << "join(";
  for (std::size_t c = 0; c < dim; ++c) {
    if (c) prov << ", ";
    prov << spec.roles[c].label << "[t+" << spec.roles[c].lag << "]";
  }
  prov << ")";
  return PointCloud(dim, std::move(coords), prov.str());
}

PointCloud standardize(const PointCloud& cloud, std::vector<AffineMap>* maps) {
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();
  std::vector<AffineMap> affine(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += cloud.at(i, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = cloud.at(i, c) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
      throw DegenerateCoordinateError(
          "coordinate " + std::to_string(c + 1) + " is constant and cannot be standardized", c + 1);
    }
    affine[c] = {mean, sd};
  }

  std::vector<double> coords(cloud.coords());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < dim; ++c) {
      double& v = coords[i * dim + c];
      v = (v - affine[c].mean) / affine[c].scale;
    }
  }

  std::ostringstream prov;
  prov.precision(17);
  prov << cloud.provenance() << " | standardized";
  for (std::size_t c = 0; c < dim; ++c) {
    prov << " c" << c + 1 << ":(v-" << affine[c].mean << ")/" << affine[c].scale;
  }
  if (maps) *maps = affine;
  return PointCloud(dim, std::move(coords), prov.str());
}

CouplingSample CouplingSample::from_series(const TimeSeries& x, const TimeSeries& y) {
  if (x.size() != y.size()) {
    throw LengthError("x and y must have equal length (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw LengthError("need at least 3 samples to form (x, y, x')");
  const std::size_t n = x.size() - 1;
  return CouplingSample{x.slice(0, n, "x"), y.slice(0, n, "y"), x.slice(1, n, "x_next")};
}

CouplingSample CouplingSample::from_triples(TimeSeries x, TimeSeries y, TimeSeries x_next) {
  if (x.size() != y.size() || x.size() != x_next.size()) {
    throw LengthError("x, y and x_next must have equal length");
  }
  return CouplingSample{std::move(x), std::move(y), std::move(x_next)};
}

namespace {

PointCloud sample_join(const CouplingSample& s, std::initializer_list<const char*> labels) {
  const TimeSeries parts[] = {
      TimeSeries(s.x.values(), "x"), TimeSeries(s.y.values(), "y"),
      TimeSeries(s.x_next.values(), "x_next")};
  JoinSpec spec;
  for (const char* l : labels) spec.roles.push_back({l, 0});
  return join(parts, spec);
}

}  // namespace

PointCloud CouplingSample::cloud_x() const { return sample_join(*this, {"x"}); }
PointCloud CouplingSample::cloud_x_xnext() const { return sample_join(*this, {"x", "x_next"}); }
PointCloud CouplingSample::cloud_x_y() const { return sample_join(*this, {"x", "y"}); }
PointCloud CouplingSample::cloud_x_y_xnext() const {
  return sample_join(*this, {"x", "y", "x_next"});
}

}  // namespace geoc
