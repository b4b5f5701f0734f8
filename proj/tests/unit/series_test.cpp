#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "geoc/error.hpp"
#include "geoc/rng.hpp"
#include "geoc/series.hpp"

using namespace geoc;

namespace {

std::vector<double> rows(const PointCloud& c) { return c.coords(); }

PointCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> v(n * dim);
  for (double& x : v) x = rng.uniform(-3.0, 5.0);
  return PointCloud(dim, std::move(v));
}

}  // namespace

TEST(TimeSeries, RejectsNonFiniteAndShort) {
  EXPECT_THROW(TimeSeries({1.0}), LengthError);
  EXPECT_THROW(TimeSeries({1.0, std::nan("")}), DataError);
  EXPECT_THROW(TimeSeries({1.0, std::numeric_limits<double>::infinity()}), DataError);
  EXPECT_NO_THROW(TimeSeries({1.0, 2.0}));
}

TEST(Join, DelayPair) {
  const TimeSeries x({1, 2, 3}, "x");
  const TimeSeries s[] = {x};
  const PointCloud c = join(s, JoinSpec{{{"x", 0}, {"x", 1}}});
  EXPECT_EQ(c.dim(), 2u);
  EXPECT_EQ(rows(c), (std::vector<double>{1, 2, 2, 3}));
}

TEST(Join, Triple) {
  const TimeSeries s[] = {TimeSeries({1, 2, 3}, "x"), TimeSeries({4, 5, 6}, "y")};
  const PointCloud c = join(s, JoinSpec{{{"x", 0}, {"y", 0}, {"x", 1}}});
  EXPECT_EQ(rows(c), (std::vector<double>{1, 4, 2, 2, 5, 3}));
}

TEST(Join, LagTooLong) {
  const TimeSeries s[] = {TimeSeries({1, 2}, "x")};
  EXPECT_THROW(join(s, JoinSpec{{{"x", 0}, {"x", 2}}}), LengthError);
}

TEST(Join, MismatchedLengths) {
  const TimeSeries s[] = {TimeSeries({1, 2, 3}, "x"), TimeSeries({4, 5}, "y")};
  EXPECT_THROW(join(s, JoinSpec{{{"x", 0}, {"y", 0}}}), LengthError);
}

TEST(Join, UnknownLabel) {
  const TimeSeries s[] = {TimeSeries({1, 2, 3}, "x")};
  EXPECT_THROW(join(s, JoinSpec{{{"z", 0}}}), LookupError);
}

TEST(Join, Deterministic) {
  CounterRng rng(9);
  std::vector<double> a(500), b(500);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform();
  const TimeSeries s[] = {TimeSeries(a, "x"), TimeSeries(b, "y")};
  const JoinSpec spec{{{"x", 0}, {"y", 0}, {"x", 1}}};
  EXPECT_EQ(join(s, spec), join(s, spec));
  EXPECT_EQ(join(s, spec).size(), 499u);
}

TEST(Standardize, TwoPoints) {
  const PointCloud c = standardize(PointCloud(1, {0.0, 2.0}));
  EXPECT_DOUBLE_EQ(c.at(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(c.at(1, 0), 1.0);
}

TEST(Standardize, ConstantColumnNamed) {
  try {
    standardize(PointCloud(2, {1, 5, 2, 5}));
    FAIL() << "expected DegenerateCoordinateError";
  } catch (const DegenerateCoordinateError& e) {
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(Standardize, Idempotent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PointCloud once = standardize(random_cloud(1000, 3, seed));
    const PointCloud twice = standardize(once);
    for (std::size_t k = 0; k < once.coords().size(); ++k) {
      EXPECT_NEAR(once.coords()[k], twice.coords()[k], 1e-12);
    }
  }
}

TEST(Standardize, RecordsAffineMaps) {
  std::vector<AffineMap> maps;
  const PointCloud c = standardize(PointCloud(1, {1, 2, 3, 4}), &maps);
  ASSERT_EQ(maps.size(), 1u);
  EXPECT_DOUBLE_EQ(maps[0].mean, 2.5);
  EXPECT_DOUBLE_EQ(maps[0].scale, std::sqrt(1.25));
  EXPECT_NE(c.provenance().find("standardized"), std::string::npos);
}

TEST(CouplingSample, FromSeriesAligns) {
  const CouplingSample s = CouplingSample::from_series(TimeSeries({1, 2, 3, 4}), TimeSeries({5, 6, 7, 8}));
  EXPECT_EQ(s.x.values(), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(s.y.values(), (std::vector<double>{5, 6, 7}));
  EXPECT_EQ(s.x_next.values(), (std::vector<double>{2, 3, 4}));
  EXPECT_EQ(rows(s.cloud_x_y_xnext()), (std::vector<double>{1, 5, 2, 2, 6, 3, 3, 7, 4}));
}

TEST(PointCloud, ScaledAndPrefix) {
  const PointCloud c(2, {1, 2, 3, 4});
  EXPECT_EQ(rows(c.scaled(2.0)), (std::vector<double>{2, 4, 6, 8}));
  EXPECT_EQ(rows(c.prefix(1)), (std::vector<double>{1, 3}));
  EXPECT_THROW(c.prefix(3), ArgumentError);
}
