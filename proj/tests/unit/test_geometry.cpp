#include <stratspace/geometry.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace stratspace;

namespace {

Region unit_square() { return Region::rectangle({0, 0, 1, 1}); }

Region square_with_hole() {
  return Region::polygon({{{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                          {{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}}});
}

// Brute-force midpoint count of region ∩ rect on a fine grid.
double grid_area(const Region& r, const Rect& rect, int m) {
  const double dx = rect.width() / m, dy = rect.height() / m;
  double hits = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      hits += contains(r, {rect.xmin + (i + 0.5) * dx, rect.ymin + (j + 0.5) * dy});
    }
  }
  return hits * dx * dy;
}

}  // namespace

TEST(Area, Basics) {
  EXPECT_DOUBLE_EQ(area(unit_square()), 1.0);
  EXPECT_NEAR(area(square_with_hole()), 0.75, 1e-15);
  EXPECT_NEAR(area(Region::disk({0, 0}, 2)), 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(area(Region::ellipse({1, 1}, 2, 0.5, 0.3)), std::numbers::pi, 1e-12);
  const auto u = Region::disjoint_union({Region::disk({0, 0}, 1), Region::rectangle({2, 2, 3, 4})});
  EXPECT_NEAR(area(u), std::numbers::pi + 2.0, 1e-12);
}

TEST(Area, ClockwiseInputNormalized) {
  const auto r = Region::polygon({{{0, 0}, {0, 2}, {3, 2}, {3, 0}}, {}});
  EXPECT_NEAR(area(r), 6.0, 1e-15);
}

TEST(Region, RejectsInvalidShapes) {
  EXPECT_THROW(Region::polygon({{{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {}}), GeometryError);
  EXPECT_THROW(Region::disk({0, 0}, 0.0), GeometryError);
  EXPECT_THROW(Region::polygon({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{2, 2}, {3, 2}, {3, 3}}}}),
               GeometryError);
  EXPECT_THROW(Region::disjoint_union({Region::disk({0, 0}, 1), Region::disk({0.5, 0}, 1)}),
               GeometryError);
}

TEST(Diameter, Examples) {
  EXPECT_NEAR(diameter(unit_square()), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(diameter(Region::disk({0, 0}, 1)), 2.0);
  EXPECT_NEAR(diameter(Region::polygon({{{0, 0}, {3, 0}, {0, 4}}, {}})), 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(diameter(Region::ellipse({0, 0}, 3, 1, 1.0)), 6.0);
}

TEST(Diameter, BoundsArea) {
  const std::vector<Region> regions{unit_square(), square_with_hole(), Region::disk({1, 2}, 0.3),
                                    Region::ellipse({0, 0}, 5, 0.2, 0.7),
                                    Region::polygon({{{0, 0}, {3, 0}, {0, 4}}, {}})};
  for (const auto& r : regions) EXPECT_LE(area(r), diameter(r) * diameter(r));
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains(unit_square(), {0.5, 0.5}));
  EXPECT_FALSE(contains(unit_square(), {1.5, 0.5}));
  EXPECT_TRUE(contains(unit_square(), {1.0, 0.3}));
  EXPECT_TRUE(contains(Region::disk({0, 0}, 1), {0.6, 0.8}));
  EXPECT_FALSE(contains(square_with_hole(), {0.5, 0.5}));
  EXPECT_TRUE(contains(square_with_hole(), {0.1, 0.5}));
}

TEST(UniformPoint, TriangleCentroid) {
  const auto tri = Region::polygon({{{0, 0}, {1, 0}, {0, 1}}, {}});
  RandomStream s(11);
  const int n = 100000;
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    const Point p = uniform_point(tri, s);
    ASSERT_TRUE(contains(tri, p));
    sx += p.x;
    sy += p.y;
  }
  // Var of a coordinate on this triangle is 1/18.
  const double se = std::sqrt(1.0 / 18.0 / n);
  EXPECT_NEAR(sx / n, 1.0 / 3.0, 3 * se);
  EXPECT_NEAR(sy / n, 1.0 / 3.0, 3 * se);
}

TEST(UniformPoint, ChiSquareOnSubcells) {
  RandomStream s(5, {1});
  const int n = 100000;
  std::vector<int> counts(16, 0);
  for (int i = 0; i < n; ++i) {
    const Point p = uniform_point(unit_square(), s);
    ++counts[std::min(3, int(p.x * 4)) + 4 * std::min(3, int(p.y * 4))];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 16.0) * (c - n / 16.0) / (n / 16.0);
  EXPECT_LT(chi2, 37.70);  // chi-square(15) upper 0.001 point
}

TEST(UniformPoint, EllipseAndHoleSupport) {
  RandomStream s(8);
  const auto e = Region::ellipse({2, -1}, 1.5, 0.4, 0.9);
  const auto h = square_with_hole();
  for (int i = 0; i < 5000; ++i) {
    ASSERT_TRUE(contains(e, uniform_point(e, s)));
    ASSERT_TRUE(contains(h, uniform_point(h, s)));
  }
}

TEST(IntersectionLength, Examples) {
  const auto d = Region::disk({0, 0}, 1);
  EXPECT_NEAR(intersection_length({{0, 0}, 4, 0}, d), 2.0, 1e-12);
  EXPECT_NEAR(intersection_length({{1.5, 0}, 4, 0}, d), 1.5, 1e-12);
  EXPECT_DOUBLE_EQ(intersection_length({{0, 5}, 4, 0}, d), 0.0);
}

TEST(IntersectionLength, PolygonWithHole) {
  const auto h = square_with_hole();
  EXPECT_NEAR(intersection_length({{0.5, 0.5}, 2, 0}, h), 0.5, 1e-12);
  EXPECT_NEAR(intersection_length({{0.5, 0.1}, 2, 0}, h), 1.0, 1e-12);
  EXPECT_NEAR(intersection_length({{0.5, 0.5}, 0.2, 0}, h), 0.0, 1e-12);
}

TEST(IntersectionLength, RigidMotionInvariant) {
  const std::vector<Region> regions{square_with_hole(), Region::ellipse({0.3, 0.2}, 0.6, 0.25, 0.4),
                                    Region::disk({0.5, 0.5}, 0.3)};
  RandomStream s(3);
  for (const auto& r : regions) {
    for (int i = 0; i < 200; ++i) {
      const Segment seg{{s.uniform(-0.5, 1.5), s.uniform(-0.5, 1.5)}, s.uniform(0.1, 2), s.uniform(0, 3.14)};
      const double angle = s.uniform(-3, 3);
      const Point shift{s.uniform(-10, 10), s.uniform(-10, 10)};
      EXPECT_NEAR(intersection_length(seg, r),
                  intersection_length(transformed(seg, angle, shift), transformed(r, angle, shift)),
                  1e-9);
    }
  }
}

TEST(ClippedArea, MatchesFineGrid) {
  const std::vector<Region> regions{Region::disk({0.5, 0.5}, 0.3), Region::ellipse({0.4, 0.6}, 0.5, 0.2, 0.6),
                                    square_with_hole()};
  const std::vector<Rect> rects{{0.3, 0.3, 0.6, 0.55}, {0.0, 0.0, 0.5, 0.5}, {0.7, 0.2, 0.9, 0.8}};
  for (const auto& r : regions) {
    for (const auto& rect : rects) {
      // Midpoint counting errs by at most half a grid step along the boundary.
      const int m = 2000;
      const double h = std::max(rect.width(), rect.height()) / m;
      EXPECT_NEAR(clipped_area(r, rect), grid_area(r, rect, m), (rect.width() + rect.height()) * h);
    }
  }
}

TEST(ClippedArea, AdditiveOverCells) {
  const std::vector<Region> regions{Region::disk({0.5, 0.5}, 0.45), Region::ellipse({0.5, 0.5}, 0.45, 0.3, 0.5),
                                    square_with_hole()};
  for (const auto& r : regions) {
    double total = 0;
    const int k = 37;
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) {
        total += clipped_area(r, {double(i) / k, double(j) / k, double(i + 1) / k, double(j + 1) / k});
      }
    }
    EXPECT_NEAR(total, area(r), 1e-9 * area(r));
  }
}

TEST(Triangulate, AreaPreservedWithHoles) {
  const Polygon p{{{0, 0}, {4, 0}, {4, 3}, {2, 1.5}, {0, 3}},
                  {{{0.5, 0.5}, {1.0, 0.5}, {1.0, 1.0}, {0.5, 1.0}}, {{3.0, 0.5}, {3.5, 0.5}, {3.5, 1.0}}}};
  double total = 0;
  for (const auto& t : triangulate(p)) {
    const double a = 0.5 * cross(t[1] - t[0], t[2] - t[0]);
    EXPECT_GT(a, 0.0);
    total += a;
  }
  EXPECT_NEAR(total, area(Region::polygon(p)), 1e-12);
}

TEST(Hull, DiameterAndPairDistance) {
  const auto h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.7}});
  EXPECT_EQ(h.size(), 4u);
  EXPECT_NEAR(hull_diameter(h), std::sqrt(2.0), 1e-15);
  const auto g = convex_hull({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
  EXPECT_NEAR(max_hull_distance(h, g), std::sqrt(5.0), 1e-15);
}
