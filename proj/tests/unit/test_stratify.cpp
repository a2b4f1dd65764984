#include <stratspace/stratify.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

using namespace stratspace;

namespace {
const Region kSquare = Region::rectangle({0, 0, 1, 1});

// Irregular concave polygon used for partition stress tests.
Region blob() {
  return Region::polygon({{{0, 0}, {3, 0.4}, {4, 2}, {2.6, 2.2}, {2.2, 3.5}, {0.4, 3}, {0.8, 1.6}}, {}});
}
}  // namespace

TEST(Raster, UnitSquareAllFull) {
  const Raster r = rasterize(kSquare, 128);
  EXPECT_EQ(r.nx, 128);
  EXPECT_EQ(r.ny, 128);
  for (double f : r.fraction) ASSERT_DOUBLE_EQ(f, 1.0);
  EXPECT_NEAR(r.total_area(), 1.0, 1e-12);
}

TEST(Raster, DiskArea) {
  const Raster r = rasterize(Region::disk({0, 0}, 1), 512);
  EXPECT_NEAR(r.total_area(), std::numbers::pi, 1e-3 * std::numbers::pi);
}

TEST(Raster, Errors) {
  EXPECT_THROW(rasterize(kSquare, 32), StratifyError);
  EXPECT_THROW(rasterize_frame(kSquare, {2, 2, 3, 3}, 64, 64), StratifyError);
}

TEST(GridPartition, TwoByTwo) {
  const auto s = grid_partition(kSquare, 2);
  ASSERT_EQ(s.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.area(i), 0.25, 1e-14);
  const auto d = diagnostics(s);
  EXPECT_NEAR(d.d_n, std::sqrt(2.0) / 2, 1e-14);
  EXPECT_NEAR(d.b_hat, 2.0, 1e-13);
  EXPECT_NEAR(d.c_hat, 1.0, 1e-13);
  const std::vector<int> serpentine{0, 1, 3, 2};
  EXPECT_TRUE(std::equal(s.order().begin(), s.order().end(), serpentine.begin()));
  EXPECT_EQ(s.adjacent_consecutive_pairs(), 3);
}

TEST(GridPartition, RectangleCells) {
  const auto s = grid_partition(Region::rectangle({0, 0, 2, 1}), 2);
  ASSERT_EQ(s.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.area(i), 0.5, 1e-14);
  EXPECT_NEAR(s.diameter(0), std::hypot(1.0, 0.5), 1e-14);
}

TEST(GridPartition, FourByFourSequentialDistance) {
  const auto s = grid_partition(kSquare, 4);
  EXPECT_EQ(s.adjacent_consecutive_pairs(), 15);
  EXPECT_NEAR(diagnostics(s).big_d_n, std::sqrt(5.0) / 4, 1e-14);
}

TEST(GridPartition, ConstantsRealized) {
  for (int k : {2, 4, 8, 16}) {
    const auto d = diagnostics(grid_partition(kSquare, k));
    EXPECT_NEAR(d.b_hat, 2.0, 1e-9);
    EXPECT_NEAR(d.c_hat, 1.0, 1e-9);
  }
}

TEST(GridPartition, DropsCellsMissingRegion) {
  const auto s = grid_partition(Region::polygon({{{0, 0}, {1, 0}, {0, 1}}, {}}), 4);
  EXPECT_EQ(s.size(), 10);
  EXPECT_NEAR(std::accumulate(s.areas().begin(), s.areas().end(), 0.0), 0.5, 1e-12);
  EXPECT_TRUE(s.connected());
}

TEST(Diagnostics, BoundaryCountCircle) {
  // Brute force: a 4x4 cell crosses the circle when its nearest point to the
  // center lies inside and its farthest corner lies outside.
  const Point c{0.5, 0.5};
  const double r = 0.3;
  int expected = 0;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const double x0 = i / 4.0, x1 = x0 + 0.25, y0 = j / 4.0, y1 = y0 + 0.25;
      const double nx = std::clamp(c.x, x0, x1), ny = std::clamp(c.y, y0, y1);
      const double near = std::hypot(nx - c.x, ny - c.y);
      double far = 0;
      for (double x : {x0, x1}) {
        for (double y : {y0, y1}) far = std::max(far, std::hypot(x - c.x, y - c.y));
      }
      expected += near < r && far > r;
    }
  }
  EXPECT_EQ(expected, 12);
  const auto d = diagnostics(grid_partition(kSquare, 4), Region::disk(c, r));
  ASSERT_TRUE(d.boundary_stratum_count.has_value());
  EXPECT_EQ(*d.boundary_stratum_count, expected);
}

TEST(Diagnostics, BoundaryCountGrowsLikeRootN) {
  std::vector<double> lx, ly;
  for (int k : {4, 8, 16, 32}) {
    const auto d = diagnostics(grid_partition(kSquare, k), Region::disk({0.5, 0.5}, 0.3));
    lx.push_back(std::log(double(k * k)));
    ly.push_back(std::log(double(*d.boundary_stratum_count)));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_GE(slope, 0.35);
  EXPECT_LE(slope, 0.65);
}

TEST(Stratification, SampleStaysInStratum) {
  const auto s = grid_partition(Region::disk({0, 0}, 1), 3);
  RandomStream rs(7);
  for (int i = 0; i < s.size(); ++i) {
    const Rect cell = s.raster().cell_rect(s.cells(i).front());
    (void)cell;
    for (int t = 0; t < 500; ++t) {
      const Point p = s.sample(i, rs);
      ASSERT_TRUE(contains(s.region(), p));
      const auto& r = s.raster();
      const int ci = std::min(r.nx - 1, int((p.x - r.origin.x) / r.cell_w));
      const int cj = std::min(r.ny - 1, int((p.y - r.origin.y) / r.cell_h));
      ASSERT_EQ(s.assignment()[std::size_t(cj) * r.nx + ci], i);
    }
  }
}

TEST(Stratification, SampleMeanIsCentroid) {
  const auto s = grid_partition(kSquare, 2);
  RandomStream rs(12);
  const int n = 100000;
  double sx = 0;
  for (int t = 0; t < n; ++t) sx += s.sample(3, rs).x;
  EXPECT_NEAR(sx / n, 0.75, 3 * std::sqrt(0.25 * 0.25 / 12 / n));
}

TEST(Stratification, WithOrderValidates) {
  const auto s = grid_partition(kSquare, 2);
  EXPECT_THROW(s.with_order({0, 1, 2}), StratifyError);
  EXPECT_THROW(s.with_order({0, 1, 1, 2}), StratifyError);
  EXPECT_NO_THROW(s.with_order({3, 2, 1, 0}));
}

TEST(EqualArea, UnitSquareFour) {
  PartitionTrace trace;
  const auto s = equal_area_compact_partition(kSquare, 4, {}, &trace);
  ASSERT_EQ(s.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.area(i), 0.25, 0.0025);
  EXPECT_TRUE(s.connected());
  EXPECT_LE(diagnostics(s).b_hat, 4.0);
  for (std::size_t i = 1; i < trace.objective_history.size(); ++i) {
    EXPECT_LE(trace.objective_history[i], trace.objective_history[i - 1] * (1 + 1e-12));
  }
}

TEST(EqualArea, SingleStratum) {
  const auto s = equal_area_compact_partition(blob(), 1, {});
  ASSERT_EQ(s.size(), 1);
  EXPECT_EQ(s.order().size(), 1u);
  EXPECT_DOUBLE_EQ(diagnostics(s).big_d_n, 0.0);
}

TEST(EqualArea, BalanceWithinOneCell) {
  PartitionParams p;
  p.resolution = 96;
  for (int n : {7, 12}) {
    PartitionTrace trace;
    const auto s = equal_area_compact_partition(blob(), n, p, &trace);
    const auto [lo, hi] = std::minmax_element(s.areas().begin(), s.areas().end());
    EXPECT_LE(*hi - *lo, s.raster().cell_area() * (1 + 1e-6)) << n;
    EXPECT_TRUE(s.connected()) << n;
    EXPECT_NEAR(std::accumulate(s.areas().begin(), s.areas().end(), 0.0), s.raster().total_area(), 1e-9);
    for (std::size_t i = 1; i < trace.objective_history.size(); ++i) {
      EXPECT_LE(trace.objective_history[i], trace.objective_history[i - 1] * (1 + 1e-12));
    }
  }
}

TEST(EqualArea, Deterministic) {
  PartitionParams p;
  p.resolution = 80;
  const auto a = equal_area_compact_partition(blob(), 6, p);
  const auto b = equal_area_compact_partition(blob(), 6, p);
  EXPECT_TRUE(std::equal(a.assignment().begin(), a.assignment().end(), b.assignment().begin()));
  EXPECT_TRUE(std::equal(a.order().begin(), a.order().end(), b.order().begin()));
}

TEST(EqualArea, RejectsTooCoarseRaster) {
  PartitionParams p;
  p.resolution = 64;
  EXPECT_THROW(equal_area_compact_partition(kSquare, 300, p), StratifyError);
}

TEST(SequentialIndex, IsPermutationAndMostlyAdjacent) {
  const auto s = equal_area_compact_partition(blob(), 10, {});
  const auto order = sequential_index(s);
  std::set<int> seen(order.begin(), order.end());
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_GE(s.with_order(order).adjacent_consecutive_pairs(), 8);
}
