#include <stratspace/field.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace stratspace;

namespace {
const Region kSquare = Region::rectangle({0, 0, 1, 1});
}

TEST(Field, CatalogExamples) {
  EXPECT_DOUBLE_EQ(builtin_field("linear", {}, kSquare)({0.3, 0.7}), 0.3);
  FieldParams disk;
  disk.center = {0, 0};
  disk.radius = 1;
  EXPECT_DOUBLE_EQ(builtin_field("disk_indicator", disk, Region::rectangle({-3, -3, 3, 3}))({2, 0}), 0.0);
  FieldParams cusp;
  cusp.center = {0, 0};
  cusp.alpha = 0.5;
  EXPECT_DOUBLE_EQ(builtin_field("holder_cusp", cusp, kSquare)({0.25, 0}), 0.5);
  EXPECT_DOUBLE_EQ(builtin_field("constant", {}, kSquare)({0.1, 0.9}), 1.0);
}

TEST(Field, Metadata) {
  const auto lin = builtin_field("linear", {}, kSquare);
  EXPECT_EQ(lin.metadata().smoothness, SmoothnessClass::lipschitz);
  EXPECT_DOUBLE_EQ(lin.metadata().alpha, 1.0);
  EXPECT_DOUBLE_EQ(*lin.metadata().holder_h, 1.0);
  const auto cusp = builtin_field("holder_cusp", {}, kSquare);
  EXPECT_EQ(cusp.metadata().smoothness, SmoothnessClass::holder);
  EXPECT_DOUBLE_EQ(cusp.metadata().alpha, 0.5);
  const auto ind = builtin_field("polygon_indicator", {}, kSquare);
  EXPECT_EQ(ind.metadata().smoothness, SmoothnessClass::piecewise_holder);
  EXPECT_TRUE(ind.metadata().indicator.has_value());
}

TEST(Field, Errors) {
  EXPECT_THROW(builtin_field("nope", {}, kSquare), FieldError);
  FieldParams p;
  p.alpha = 1.5;
  EXPECT_THROW(builtin_field("holder_cusp", p, kSquare), FieldError);
  p.alpha = 0.0;
  EXPECT_THROW(builtin_field("holder_cusp", p, kSquare), FieldError);
}

TEST(Field, ExtendedEval) {
  const auto lin = builtin_field("linear", {}, kSquare);
  EXPECT_DOUBLE_EQ(extended_eval(lin, {0.4, 0.5}), 0.4);
  EXPECT_DOUBLE_EQ(extended_eval(lin, {1.4, 0.5}), 0.0);
  const auto one = builtin_field("constant", {}, Region::disk({0, 0}, 1));
  EXPECT_DOUBLE_EQ(extended_eval(one, {0.999, 0}), 1.0);
  const auto ext = extended_field(lin, Region::rectangle({0, 0, 2, 2}));
  EXPECT_DOUBLE_EQ(ext({1.5, 1.5}), 0.0);
  EXPECT_DOUBLE_EQ(ext({0.5, 0.5}), 0.5);
}

TEST(Field, LineIntercept) {
  const CoverSpec spec{Region::disk({0, 0}, 1), 4.0, 0.0};
  const auto f = line_intercept_field(spec, Region::rectangle({-5, -5, 5, 5}));
  EXPECT_NEAR(f({0, 0}), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(f({0, 2}), 0.0);
  EXPECT_NEAR(f({1.5, 0}), 0.375, 1e-12);
  EXPECT_EQ(f.metadata().smoothness, SmoothnessClass::line_intercept);
  EXPECT_THROW(line_intercept_field({Region::disk({0, 0}, 1), 0.0, 0.0}, kSquare), FieldError);
  RandomStream s(4);
  for (int i = 0; i < 2000; ++i) {
    const double v = f({s.uniform(-5, 5), s.uniform(-5, 5)});
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Field, LinearCombinationIsPointwise) {
  const auto a = builtin_field("linear", {}, kSquare);
  const auto b = builtin_field("smooth_sine", {}, kSquare);
  const auto c = linear_combination(2.0, a, -3.0, b);
  for (Point p : {Point{0.1, 0.2}, Point{0.7, 0.3}, Point{0.5, 0.99}}) {
    EXPECT_DOUBLE_EQ(c(p), 2.0 * a(p) - 3.0 * b(p));
  }
}

TEST(Field, SpotChecksHoldForCatalog) {
  for (const char* id : {"constant", "linear", "smooth_sine", "holder_cusp", "disk_indicator",
                         "polygon_indicator"}) {
    const auto f = builtin_field(id, {}, kSquare);
    const auto sup = sup_spot_check(f, 10000, RandomStream(1, {1}));
    EXPECT_EQ(sup.violations, 0u) << id;
    const auto h = holder_spot_check(f, 10000, RandomStream(1, {2}));
    if (f.metadata().smoothness == SmoothnessClass::lipschitz ||
        f.metadata().smoothness == SmoothnessClass::holder) {
      EXPECT_EQ(h.samples, 10000u) << id;
      EXPECT_EQ(h.violations, 0u) << id;
    }
  }
}
