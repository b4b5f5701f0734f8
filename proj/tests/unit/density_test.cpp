#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "geoc/density.hpp"
#include "geoc/error.hpp"

using namespace geoc;

TEST(Density1D, UniformBasics) {
  const Density1D d = Density1D::uniform(1.0, 3.0, 4);
  EXPECT_DOUBLE_EQ(d.pdf(2.0), 0.5);
  EXPECT_DOUBLE_EQ(d.pdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(2.5), 0.75);
  EXPECT_DOUBLE_EQ(d.cdf(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(5.0), 1.0);
  EXPECT_NEAR(d.mass(), 1.0, 1e-15);
  EXPECT_NEAR(d.entropy(), std::log(2.0), 1e-15);
}

TEST(Density1D, CdfIntegral) {
  // Integral of (x - 1) / 2 from 1 to x.
  const Density1D d = Density1D::uniform(1.0, 3.0, 8);
  for (double x : {1.0, 1.3, 2.0, 2.9, 3.0}) EXPECT_NEAR(d.cdf_integral(x), (x - 1) * (x - 1) / 4.0, 1e-14);
  EXPECT_NEAR(d.cdf_integral(4.0), 1.0 + 1.0, 1e-14);
  EXPECT_EQ(d.cdf_integral(0.0), 0.0);
}

TEST(Density1D, Validation) {
  EXPECT_THROW(Density1D(0.0, 1.0, {0.5, 0.5}), ArgumentError);
  EXPECT_THROW(Density1D(0.0, 1.0, {2.5, -0.5}), ArgumentError);
  EXPECT_THROW(Density1D(1.0, 0.0, {1.0}), ArgumentError);
  EXPECT_THROW(Density1D(0.0, 1.0, {}), ArgumentError);
  EXPECT_NO_THROW(Density1D(0.0, 1.0, {1.5, 0.5}));
}

TEST(Density1D, FromCdfIsExact) {
  // pdf 2x on [0, 1]: cell masses b^2 - a^2.
  const Density1D d = Density1D::from_cdf(0.0, 1.0, 10, [](double x) { return x * x; });
  for (std::size_t i = 0; i < 10; ++i) {
    const double a = 0.1 * static_cast<double>(i);
    EXPECT_NEAR(d.values()[i], ((a + 0.1) * (a + 0.1) - a * a) / 0.1, 1e-12);
  }
  EXPECT_NEAR(d.mass(), 1.0, 1e-12);
}

TEST(Density1D, FromPdfNormalizes) {
  const Density1D d = Density1D::from_pdf(0.0, 2.0, 1000, [](double x) { return 5.0 * x; });
  EXPECT_NEAR(d.mass(), 1.0, 1e-12);
  EXPECT_NEAR(d.pdf(1.0005), 0.5 * 1.001, 1e-9);  // average over [1, 1.002]
}

TEST(Density1D, ShiftedAndCoarsened) {
  const Density1D d = Density1D::from_cdf(0.0, 1.0, 64, [](double x) { return x * x; });
  const Density1D s = d.shifted(2.5);
  EXPECT_DOUBLE_EQ(s.lo(), 2.5);
  EXPECT_EQ(s.values(), d.values());
  const Density1D c = d.coarsened(4);
  EXPECT_EQ(c.cells(), 16u);
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_NEAR(c.cdf(x), d.cdf(x), 1e-14);
  EXPECT_THROW(d.coarsened(5), ArgumentError);
}

TEST(Density1D, EntropyIgnoresEmptyCells) {
  const Density1D d(0.0, 2.0, {1.0, 0.0});
  EXPECT_NEAR(d.entropy(), 0.0, 1e-15);
}

TEST(L1Distance, DifferentGrids) {
  const Density1D a = Density1D::uniform(0.0, 1.0);
  const Density1D b = Density1D::uniform(0.5, 1.5, 3);
  // Overlap [0.5, 1] contributes 0; the two disjoint halves contribute 0.5 each.
  EXPECT_NEAR(l1_distance(a, b), 1.0, 1e-14);
  EXPECT_NEAR(l1_distance(a, a), 0.0, 1e-15);
  const Density1D c = Density1D::uniform(0.0, 2.0, 5);
  EXPECT_NEAR(l1_distance(a, c), 0.5 + 0.5, 1e-14);
}
