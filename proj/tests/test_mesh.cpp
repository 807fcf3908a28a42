#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pnpfv/error.hpp"
#include "pnpfv/mesh.hpp"

using namespace pnpfv;

TEST(Grid, FourCellsOnUnitInterval) {
  const Grid g = build_grid(4, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(g.h(), 0.25);
  const double expected[] = {0.125, 0.375, 0.625, 0.875};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(g.center(j), expected[j]);
  EXPECT_EQ(g.interfaces().size(), 5u);
}

TEST(Grid, SpacingsOfTheChannelAndBumpRuns) {
  EXPECT_NEAR(build_grid(100, 0.0, 1.0).h(), 0.01, 1e-17);
  EXPECT_NEAR(build_grid(200, -10.0, 10.0).h(), 0.1, 1e-16);
}

TEST(Grid, EndInterfacesAreExact) {
  for (std::size_t n : {3u, 7u, 100u, 333u, 4096u}) {
    const Grid g(n, -10.0, 3.3);
    EXPECT_EQ(g.interface(0), -10.0);
    EXPECT_EQ(g.interface(n), 3.3);
    for (std::size_t k = 0; k <= n; ++k) {
      EXPECT_NEAR(g.interface(k), -10.0 + static_cast<double>(k) * g.h(), 4e-16 * 13.3 * static_cast<double>(n));
    }
  }
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(build_grid(1, 0.0, 1.0), ConfigError);
  EXPECT_THROW(build_grid(0, 0.0, 1.0), ConfigError);
  EXPECT_THROW(build_grid(4, 1.0, 1.0), ConfigError);
  EXPECT_THROW(build_grid(4, 2.0, 1.0), ConfigError);
}

TEST(PiecewiseCoefficient, RejectsMismatchedSegments) {
  EXPECT_THROW(PiecewiseCoefficient({0.5}, {[](double) { return 1.0; }}), ConfigError);
  EXPECT_THROW(PiecewiseCoefficient({0.6, 0.5}, {[](double) { return 1.0; }, [](double) { return 1.0; },
                                                 [](double) { return 1.0; }}),
               ConfigError);
}

TEST(CellAverage, ConstantIsReproduced) {
  const Grid g(17, -2.0, 5.0);
  for (double v : cell_averages(PiecewiseCoefficient::constant(3.25), g)) EXPECT_DOUBLE_EQ(v, 3.25);
}

TEST(CellAverage, FirstCellOfTheManufacturedArea) {
  const Grid g(4, 0.0, 1.0);
  const oracle::Poly a{{25.0, -40.0, 16.0}};  // (5 - 4x)^2
  const auto f = PiecewiseCoefficient::smooth([](double x) { return (5.0 - 4.0 * x) * (5.0 - 4.0 * x); });
  const double exact = oracle::mean_value(a, 0.0, 0.25);  // 61/3
  EXPECT_NEAR(exact, 61.0 / 3.0, 1e-13);
  EXPECT_NEAR(cell_average(f, g, 0), exact, 1e-13 * exact);
}

TEST(CellAverage, ChannelChargeInsideChannel) {
  const ChannelGeometry geom{20.0, 0.2, 0.2};
  const auto rho = channel_charge(0.2, geom);
  const Grid g(100, 0.0, 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.interface(j) > geom.channel_begin() && g.interface(j + 1) < geom.channel_end()) {
      EXPECT_NEAR(cell_average(rho, g, j), 0.4, 1e-15);
    }
  }
}

// Polynomial segments of degree <= 9 with breakpoints that do not align with the grid.
TEST(CellAverage, MatchesAntiderivativeOracleOnPiecewisePolynomials) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, 9);
  std::uniform_int_distribution<int> cells(2, 40);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<oracle::Poly> polys(3);
    for (auto& p : polys) {
      p.c.resize(static_cast<std::size_t>(deg(rng)) + 1);
      for (auto& c : p.c) c = coef(rng);
      p.c[0] += 40.0;  // keep values away from zero so the relative bound is meaningful
    }
    const double b1 = 0.1 + 0.3 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double b2 = 0.6 + 0.3 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const PiecewiseCoefficient f({b1, b2}, {polys[0], polys[1], polys[2]});
    const Grid g(static_cast<std::size_t>(cells(rng)), 0.0, 1.0);
    const auto avg = cell_averages(f, g, Execution::serial);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double a = g.interface(j);
      const double b = g.interface(j + 1);
      // Oracle: sum of antiderivative differences over the pieces of [a, b].
      double integral = 0.0;
      const double cuts[] = {0.0, b1, b2, 1.0};
      for (int k = 0; k < 3; ++k) {
        const double lo = std::max(a, cuts[k]);
        const double hi = std::min(b, cuts[k + 1]);
        if (hi > lo) integral += oracle::mean_value(polys[static_cast<std::size_t>(k)], lo, hi) * (hi - lo);
      }
      const double expected = integral / (b - a);
      EXPECT_LE(std::abs(avg[j] - expected), 1e-13 * std::abs(expected)) << "trial " << trial << " cell " << j;
    }
  }
}

TEST(CellAverage, SumRecoversDomainIntegral) {
  const ChannelGeometry geom{20.0, 1.0 / 11.0, 1.0 / 11.0};
  const auto area = channel_area(geom);
  for (std::size_t n : {10u, 37u, 100u, 101u}) {
    const Grid g(n, 0.0, 1.0);
    double sum = 0.0;
    for (double v : cell_averages(area, g)) sum += g.h() * v;
    const double whole = integrate(area, 0.0, 1.0);
    EXPECT_NEAR(sum, whole, 1e-12 * whole);
  }
}

TEST(ChannelArea, MouthMidpointAndContinuity) {
  const ChannelGeometry geom{20.0, 0.2, 0.2};
  const auto a = channel_area(geom);
  EXPECT_DOUBLE_EQ(a(0.0), 40.0);
  EXPECT_DOUBLE_EQ(a(1.0), 40.0);
  EXPECT_DOUBLE_EQ(a(0.5), 0.4);
  for (double r : {1.0 / 3.0, 0.2, 1.0 / 11.0, 0.05}) {
    const ChannelGeometry g{20.0, r, r};
    const auto f = channel_area(g);
    for (double x : {g.channel_begin(), g.channel_end()}) {
      EXPECT_NEAR(f.left_limit(x), f.right_limit(x), 1e-14);
      EXPECT_NEAR(f.left_limit(x), 2.0 * r, 1e-14);
    }
  }
}

TEST(ChannelCharge, BathsAreNeutral) {
  const ChannelGeometry geom{20.0, 0.2, 0.2};
  const auto zero = channel_charge(0.0, geom);
  for (double x = 0.0; x <= 1.0; x += 0.01) EXPECT_EQ(zero(x), 0.0);
  EXPECT_DOUBLE_EQ(channel_charge(0.2, geom)(0.5), 0.4);
  EXPECT_EQ(channel_charge(0.1, geom)(geom.l_b() / 2.0), 0.0);
}

TEST(ChannelGeometry, Validation) {
  EXPECT_THROW((ChannelGeometry{20.0, 0.0, 0.2}.validate()), ConfigError);
  EXPECT_THROW((ChannelGeometry{0.1, 0.2, 0.2}.validate()), ConfigError);
  EXPECT_THROW((ChannelGeometry{20.0, 0.2, 1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((ChannelGeometry{20.0, 0.2, 0.2}.validate()));
  EXPECT_DOUBLE_EQ((ChannelGeometry{20.0, 0.2, 0.2}.l_b()), 0.4);
}

TEST(CellAverage, SerialAndParallelAreBitwiseEqual) {
  const auto f = PiecewiseCoefficient::smooth([](double x) { return 20.0 * (1.0 - 0.9 * std::exp(-x * x * x * x)); });
  const Grid g(2000, -10.0, 10.0);
  EXPECT_EQ(cell_averages(f, g, Execution::serial), cell_averages(f, g, Execution::parallel));
}
